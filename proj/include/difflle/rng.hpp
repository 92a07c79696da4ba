#pragma once

#include <cstdint>

#include "difflle/tensor.hpp"

namespace difflle {

/// Deterministic random stream: splitmix64 counter generator for uniforms,
/// Box-Muller transform for gaussians. The sample stream is a pure function
/// of the seed, so every run with the same seed is bit-identical on the same
/// platform. Single-owner; concurrent work derives children via child().
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : state_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Raw 64-bit draw (splitmix64: add golden-ratio constant, finalize-mix).
    std::uint64_t next_u64();

    /// Uniform in [0,1) with 53-bit resolution.
    double uniform();

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n);

    /// Standard normal via Box-Muller; the second value of each pair is cached.
    double gaussian();

    /// Child stream for task `index`: seed = mix(parent_seed + GOLDEN*(index+1)).
    /// Deterministic regardless of how many workers run or in what order.
    SeededRng child(std::uint64_t index) const;

  private:
    std::uint64_t state_;
    std::uint64_t seed_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// I.i.d. standard-normal tensor; consuming advances the rng.
ImageTensor sample_gaussian(SeededRng& rng, int channels, int height, int width);

} // namespace difflle
