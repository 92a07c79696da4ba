#pragma once

#include "difflle/rng.hpp"
#include "difflle/schedule.hpp"
#include "difflle/tensor.hpp"

namespace difflle {

/// A tensor tagged with its position on the noising chain. t = 0 is clean.
struct LatentState {
    ImageTensor tensor;
    int t = 0;
};

/// Noise estimator interface: given x_t and its timestep, predict the
/// unit-variance noise component. Output shape equals input shape.
class NoisePredictor {
  public:
    virtual ~NoisePredictor() = default;
    virtual ImageTensor predict(const ImageTensor& x_t, int t) const = 0;
};

/// Closed-form forward: sqrt(abar_t)*x0 + sqrt(1-abar_t)*eps.
ImageTensor q_sample_closed(const ImageTensor& x0, int t, const ImageTensor& eps,
                            const NoiseSchedule& sched);

/// One forward noising hop to the next ddim step after state.t (the next
/// base timestep when ddim_steps is the full sequence). The step coefficient
/// is the alpha-bar ratio between destination and source, which reduces to
/// the per-step alpha of the destination for consecutive steps.
LatentState forward_step(const LatentState& state, const NoiseSchedule& sched, SeededRng& rng);

/// Denoising function: (x_t - sqrt(1-abar_t)*eps_hat) / sqrt(abar_t).
ImageTensor predict_x0(const ImageTensor& x_t, int t, const ImageTensor& eps_hat,
                       const NoiseSchedule& sched);

/// One DDIM sampling step from t down to s (s=0 means fully clean):
///   x_s = sqrt(abar_s)*f(x_t,t) + sqrt(1-abar_s-sigma_t^2)*eps_hat + sigma_t*eps
ImageTensor ddim_step(const ImageTensor& x_t, int t, int s, const NoisePredictor& predictor,
                      const NoiseSchedule& sched, SeededRng& rng);

/// Deterministic DDIM chain down the reversed step list, ending at the clean
/// index 0. The final step targets s=0 and never injects noise.
ImageTensor reverse_chain(const ImageTensor& x_omega, const std::vector<int>& steps,
                          const NoisePredictor& predictor, const NoiseSchedule& sched);

/// Add-then-remove domain calibration: omega forward hops through the tail
/// window, then the reverse chain back to 0. Output clamped to [0,1].
ImageTensor roundtrip_calibrate(const ImageTensor& x, int omega, const NoisePredictor& predictor,
                                const NoiseSchedule& sched, SeededRng& rng);

} // namespace difflle
