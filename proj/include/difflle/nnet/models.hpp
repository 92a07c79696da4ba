#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "difflle/nnet/layers.hpp"

namespace difflle::nnet {

enum class NetKind { Denoiser, Enhancer, Discriminator };

std::string kind_name(NetKind k);
NetKind kind_from_name(const std::string& s);

struct ArchDescriptor {
    NetKind kind = NetKind::Enhancer;
    int base_channels = 16;
    int res_blocks = 3;  // enhancer only
    int time_dim = 32;   // denoiser only
};

/// Named parameter gradients, accumulated across backward calls.
using Grads = std::map<std::string, std::vector<double>>;
std::vector<double>& grad_slot(Grads& g, const ParamTensor& p);
void scale_grads(Grads& g, double k);

/// Cached activations from one forward pass. Concrete per model; backward
/// rejects tapes from another net or from a stale parameter version.
struct Tape {
    virtual ~Tape() = default;
    const void* owner = nullptr;
    std::uint64_t version = 0;
};

class Net {
  public:
    virtual ~Net() = default;

    virtual const ArchDescriptor& descriptor() const = 0;
    virtual std::vector<ParamTensor*> params() = 0;
    std::vector<const ParamTensor*> params() const;

    /// t is the diffusion timestep; pass -1 for nets that are not
    /// time-conditioned (the denoiser rejects it).
    virtual ImageTensor forward(const ImageTensor& x, int t, std::unique_ptr<Tape>& tape) const = 0;
    ImageTensor infer(const ImageTensor& x, int t = -1) const;

    /// Exact gradients of the scalar whose output-gradient is grad_out.
    /// Accumulates into g; if grad_in is non-null, writes the input gradient.
    virtual void backward(const Tape& tape, const ImageTensor& grad_out, Grads& g,
                          ImageTensor* grad_in) const = 0;

    std::uint64_t version() const { return version_; }
    void bump_version() { ++version_; }

    std::size_t param_count() const;

  protected:
    void stamp(Tape& tape) const;
    void check_tape(const Tape& tape) const;
    std::uint64_t version_ = 0;
};

/// Kaiming kernels, zero biases, unit affine scales. The output convolutions
/// of the denoiser and enhancer start at zero so both nets begin as the
/// identity map (enhancer) / zero noise estimate (denoiser).
std::unique_ptr<Net> init_network(const ArchDescriptor& desc, SeededRng& rng);

// ---------------------------------------------------------------------------

/// Residual enhancer: stem, two stride-2 downsamplings, res_blocks residual
/// blocks with instance norm, two nearest-neighbour upsamplings, head, and a
/// global skip (out = x + head path). Requires H, W divisible by 4.
class Enhancer : public Net {
  public:
    explicit Enhancer(const ArchDescriptor& desc);

    const ArchDescriptor& descriptor() const override { return desc_; }
    std::vector<ParamTensor*> params() override;
    ImageTensor forward(const ImageTensor& x, int t, std::unique_ptr<Tape>& tape) const override;
    void backward(const Tape& tape, const ImageTensor& grad_out, Grads& g,
                  ImageTensor* grad_in) const override;

    struct ResBlock {
        Conv2d conv1, conv2;
        InstanceNorm norm1, norm2;
    };

    ArchDescriptor desc_;
    Conv2d stem, down1, down2, up1, up2, head;
    std::vector<ResBlock> blocks;
};

/// Time-conditioned noise predictor: four convolutions in a U shape with one
/// additive skip; sinusoidal embedding enters the first three layers as a
/// per-channel bias. Requires H, W divisible by 2.
class Denoiser : public Net {
  public:
    explicit Denoiser(const ArchDescriptor& desc);

    const ArchDescriptor& descriptor() const override { return desc_; }
    std::vector<ParamTensor*> params() override;
    ImageTensor forward(const ImageTensor& x, int t, std::unique_ptr<Tape>& tape) const override;
    void backward(const Tape& tape, const ImageTensor& grad_out, Grads& g,
                  ImageTensor* grad_in) const override;

    ArchDescriptor desc_;
    Conv2d conv1, conv2, conv3, conv4;
    TimeBias tb1, tb2, tb3;
};

/// PatchGAN-style critic: three stride-2 convolutions and an unpadded head
/// conv producing a score map (64x64 input -> 6x6 map).
class PatchDiscriminator : public Net {
  public:
    explicit PatchDiscriminator(const ArchDescriptor& desc);

    const ArchDescriptor& descriptor() const override { return desc_; }
    std::vector<ParamTensor*> params() override;
    ImageTensor forward(const ImageTensor& x, int t, std::unique_ptr<Tape>& tape) const override;
    void backward(const Tape& tape, const ImageTensor& grad_out, Grads& g,
                  ImageTensor* grad_in) const override;

    static constexpr double kSlope = 0.2;

    ArchDescriptor desc_;
    Conv2d conv1, conv2, conv3, head;
};

} // namespace difflle::nnet
