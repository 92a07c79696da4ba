#include "difflle/schedule.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace difflle {

double NoiseSchedule::alpha_bar(int t) const {
    if (t == 0) return 1.0;
    if (t < 1 || t > num_steps)
        throw std::invalid_argument("alpha_bar: timestep " + std::to_string(t) +
                                    " outside 0.." + std::to_string(num_steps));
    return alpha_bars[t - 1];
}

double NoiseSchedule::sigma(int t) const {
    if (t < 1 || t > num_steps)
        throw std::invalid_argument("sigma: timestep out of range");
    return sigmas[t - 1];
}

NoiseSchedule make_linear_schedule(int num_steps, double beta_start, double beta_end) {
    if (num_steps < 1)
        throw std::invalid_argument("make_linear_schedule: T must be >= 1");
    if (!(beta_start > 0.0) || !(beta_start <= beta_end) || !(beta_end < 1.0))
        throw std::invalid_argument("make_linear_schedule: need 0 < beta_start <= beta_end < 1");

    NoiseSchedule s;
    s.num_steps = num_steps;
    s.betas.resize(num_steps);
    for (int t = 0; t < num_steps; ++t) {
        s.betas[t] = num_steps == 1
                         ? beta_start
                         : beta_start + (beta_end - beta_start) * t / double(num_steps - 1);
    }
    s.alphas.resize(num_steps);
    s.alpha_bars.resize(num_steps);
    double prod = 1.0;
    for (int t = 0; t < num_steps; ++t) {
        s.alphas[t] = 1.0 - s.betas[t];
        prod *= s.alphas[t];
        s.alpha_bars[t] = prod;
    }
    s.sigmas.assign(num_steps, 0.0);
    s.ddim_steps.resize(num_steps);
    std::iota(s.ddim_steps.begin(), s.ddim_steps.end(), 1);
    return s;
}

NoiseSchedule ddim_subsequence(const NoiseSchedule& sched, int n) {
    int T = sched.num_steps;
    if (n < 1 || n > T)
        throw std::invalid_argument("ddim_subsequence: n must be in 1..T, got " +
                                    std::to_string(n));
    NoiseSchedule out = sched;
    out.ddim_steps.resize(n);
    // floor((k+1)*T/n) is strictly increasing for n <= T and ends at T.
    for (int k = 0; k < n; ++k)
        out.ddim_steps[k] = static_cast<int>((static_cast<long long>(k + 1) * T) / n);
    return out;
}

std::vector<int> tail_window(const NoiseSchedule& sched, int omega) {
    int n = static_cast<int>(sched.ddim_steps.size());
    if (omega < 1 || omega > n)
        throw std::invalid_argument("tail_window: omega must be in 1..|ddim_steps|, got " +
                                    std::to_string(omega));
    return std::vector<int>(sched.ddim_steps.begin(), sched.ddim_steps.begin() + omega);
}

NoiseSchedule with_eta(const NoiseSchedule& sched, double eta) {
    if (eta < 0.0 || eta > 1.0)
        throw std::invalid_argument("with_eta: eta must be in [0,1]");
    NoiseSchedule out = sched;
    for (int t = 1; t <= sched.num_steps; ++t) {
        double ab_t = sched.alpha_bar(t);
        double ab_prev = sched.alpha_bar(t - 1);
        out.sigmas[t - 1] =
            eta * std::sqrt((1.0 - ab_prev) / (1.0 - ab_t)) * std::sqrt(1.0 - ab_t / ab_prev);
    }
    return out;
}

} // namespace difflle
