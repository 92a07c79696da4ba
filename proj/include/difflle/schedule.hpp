#pragma once

#include <vector>

namespace difflle {

/// Noise schedule over timesteps 1..T. Index 0 is reserved for the clean
/// state: alpha_bar(0) == 1 by definition. ddim_steps is the strictly
/// increasing subsequence of {1..T} that sampling actually visits; a fresh
/// schedule uses all of {1..T}.
struct NoiseSchedule {
    int num_steps = 0;               // T
    std::vector<double> betas;       // beta[t-1] for t in 1..T
    std::vector<double> alphas;      // 1 - beta
    std::vector<double> alpha_bars;  // cumulative product of alphas
    std::vector<double> sigmas;      // per-step stochasticity, default all zero
    std::vector<int> ddim_steps;     // strictly increasing subset of {1..T}

    /// alpha_bar with the t=0 convention baked in.
    double alpha_bar(int t) const;
    double sigma(int t) const;
};

/// Linear beta ramp from beta_start to beta_end inclusive (T=1 takes
/// beta_start). alphas/alpha_bars derived, sigmas zero, ddim_steps = {1..T}.
NoiseSchedule make_linear_schedule(int num_steps, double beta_start, double beta_end);

/// Shrinks ddim_steps to n near-uniformly spaced indices of {1..T}, always
/// including T. Other fields unchanged.
NoiseSchedule ddim_subsequence(const NoiseSchedule& sched, int n);

/// The omega lowest-noise DDIM steps (nearest the clean image), ascending.
std::vector<int> tail_window(const NoiseSchedule& sched, int omega);

/// Fills sigmas per the DDIM eta convention for consecutive ddim steps;
/// eta=0 restores the deterministic sampler.
NoiseSchedule with_eta(const NoiseSchedule& sched, double eta);

} // namespace difflle
