#include "difflle/rng.hpp"

#include <cmath>

namespace difflle {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
} // namespace

std::uint64_t SeededRng::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double SeededRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t SeededRng::uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    // Modulo bias is below 2^-50 for every n used here.
    return next_u64() % n;
}

double SeededRng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller on u1 in (0,1], u2 in [0,1).
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

SeededRng SeededRng::child(std::uint64_t index) const {
    return SeededRng(mix64(seed_ + kGolden * (index + 1)));
}

ImageTensor sample_gaussian(SeededRng& rng, int channels, int height, int width) {
    if (channels <= 0 || height <= 0 || width <= 0)
        throw std::invalid_argument("sample_gaussian: invalid shape " + std::to_string(channels) +
                                    "x" + std::to_string(height) + "x" + std::to_string(width));
    ImageTensor t(channels, height, width);
    for (double& v : t.data) v = rng.gaussian();
    return t;
}

} // namespace difflle
