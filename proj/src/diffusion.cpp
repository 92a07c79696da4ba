#include "difflle/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace difflle {

ImageTensor q_sample_closed(const ImageTensor& x0, int t, const ImageTensor& eps,
                            const NoiseSchedule& sched) {
    require_same_shape(x0, eps, "q_sample_closed");
    if (t < 1 || t > sched.num_steps)
        throw std::invalid_argument("q_sample_closed: timestep " + std::to_string(t) +
                                    " outside 1..T");
    double ab = sched.alpha_bar(t);
    return scale_add(std::sqrt(ab), x0, std::sqrt(1.0 - ab), eps);
}

LatentState forward_step(const LatentState& state, const NoiseSchedule& sched, SeededRng& rng) {
    if (state.t >= sched.num_steps)
        throw std::runtime_error("forward_step: chain exhausted at t=" + std::to_string(state.t));
    // Next visited timestep: smallest ddim step strictly above state.t.
    auto it = std::upper_bound(sched.ddim_steps.begin(), sched.ddim_steps.end(), state.t);
    if (it == sched.ddim_steps.end())
        throw std::runtime_error("forward_step: no ddim step above t=" + std::to_string(state.t));
    int next = *it;

    double ratio = sched.alpha_bar(next) / sched.alpha_bar(state.t);
    ImageTensor eps = sample_gaussian(rng, state.tensor.channels, state.tensor.height,
                                      state.tensor.width);
    LatentState out;
    out.tensor = scale_add(std::sqrt(ratio), state.tensor, std::sqrt(1.0 - ratio), eps);
    out.t = next;
    return out;
}

ImageTensor predict_x0(const ImageTensor& x_t, int t, const ImageTensor& eps_hat,
                       const NoiseSchedule& sched) {
    require_same_shape(x_t, eps_hat, "predict_x0");
    if (t < 1 || t > sched.num_steps)
        throw std::invalid_argument("predict_x0: timestep out of range");
    double ab = sched.alpha_bar(t);
    if (ab < 1e-12)
        throw std::runtime_error("predict_x0: alpha_bar below 1e-12 at t=" + std::to_string(t));
    double inv = 1.0 / std::sqrt(ab);
    return scale_add(inv, x_t, -std::sqrt(1.0 - ab) * inv, eps_hat);
}

ImageTensor ddim_step(const ImageTensor& x_t, int t, int s, const NoisePredictor& predictor,
                      const NoiseSchedule& sched, SeededRng& rng) {
    if (!(s < t))
        throw std::invalid_argument("ddim_step: need s < t, got s=" + std::to_string(s) +
                                    " t=" + std::to_string(t));
    if (s < 0 || t > sched.num_steps)
        throw std::invalid_argument("ddim_step: steps outside schedule range");

    ImageTensor eps_hat = predictor.predict(x_t, t);
    require_same_shape(x_t, eps_hat, "ddim_step predictor output");
    ImageTensor f = predict_x0(x_t, t, eps_hat, sched);

    double ab_s = sched.alpha_bar(s);
    double sig = s == 0 ? 0.0 : sched.sigma(t);  // last step only denoises
    double rem = 1.0 - ab_s - sig * sig;
    if (rem < 0.0)
        throw std::invalid_argument("ddim_step: sigma_t^2 exceeds 1 - alpha_bar_s");

    ImageTensor out = scale_add(std::sqrt(ab_s), f, std::sqrt(rem), eps_hat);
    if (sig > 0.0) {
        ImageTensor noise = sample_gaussian(rng, x_t.channels, x_t.height, x_t.width);
        out = scale_add(1.0, out, sig, noise);
    }
    return out;
}

ImageTensor reverse_chain(const ImageTensor& x_omega, const std::vector<int>& steps,
                          const NoisePredictor& predictor, const NoiseSchedule& sched) {
    if (steps.empty()) throw std::invalid_argument("reverse_chain: empty step list");
    for (std::size_t i = 1; i < steps.size(); ++i)
        if (steps[i] <= steps[i - 1])
            throw std::invalid_argument("reverse_chain: steps must be strictly ascending");

    // sigma = 0 throughout: Eq-5-style deterministic sampling.
    NoiseSchedule det = sched;
    std::fill(det.sigmas.begin(), det.sigmas.end(), 0.0);
    SeededRng unused(0);

    ImageTensor x = x_omega;
    for (int i = static_cast<int>(steps.size()) - 1; i >= 0; --i) {
        int t = steps[i];
        int s = i == 0 ? 0 : steps[i - 1];
        x = ddim_step(x, t, s, predictor, det, unused);
    }
    return x;
}

ImageTensor roundtrip_calibrate(const ImageTensor& x, int omega, const NoisePredictor& predictor,
                                const NoiseSchedule& sched, SeededRng& rng) {
    std::vector<int> window = tail_window(sched, omega);
    LatentState state{x, 0};
    for (int i = 0; i < omega; ++i) state = forward_step(state, sched, rng);
    if (state.t != window.back())
        throw std::runtime_error("roundtrip_calibrate: forward pass missed the tail window");
    return clamp01(reverse_chain(state.tensor, window, predictor, sched));
}

} // namespace difflle
