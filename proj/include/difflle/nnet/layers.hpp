#pragma once

#include <string>
#include <vector>

#include "difflle/rng.hpp"
#include "difflle/tensor.hpp"

namespace difflle::nnet {

struct ParamTensor {
    std::string name;
    std::vector<int> shape;
    std::vector<double> v;

    std::size_t numel() const {
        std::size_t n = 1;
        for (int d : shape) n *= static_cast<std::size_t>(d);
        return n;
    }
    void resize_to_shape() { v.assign(numel(), 0.0); }
};

/// Saved context a layer needs to run its backward pass.
struct ConvCtx {
    ImageTensor padded_in;
};
struct NormCtx {
    ImageTensor xhat;
    std::vector<double> inv_std;  // per channel
};

ImageTensor pad_reflect(const ImageTensor& x, int p);
ImageTensor pad_reflect_backward(const ImageTensor& g_padded, int p, int orig_h, int orig_w);

/// 2D convolution, reflection-padded by `pad`, stride 1 or 2.
/// Weight layout [out_ch][in_ch][k][k].
class Conv2d {
  public:
    Conv2d() = default;
    Conv2d(const std::string& name, int in_ch, int out_ch, int ksize, int stride, int pad);

    void init_kaiming(SeededRng& rng);
    void init_zero();

    int out_dim(int d) const { return (d + 2 * pad - k) / stride + 1; }

    ImageTensor forward(const ImageTensor& x, ConvCtx& ctx) const;
    /// Accumulates into gw/gb; returns the gradient wrt the unpadded input.
    ImageTensor backward(const ImageTensor& grad_out, const ConvCtx& ctx, std::vector<double>& gw,
                         std::vector<double>& gb) const;

    ParamTensor w, b;
    int ci = 0, co = 0, k = 0, stride = 1, pad = 0;
};

/// Per-channel instance normalization with learnable affine. eps = 1e-5.
class InstanceNorm {
  public:
    InstanceNorm() = default;
    explicit InstanceNorm(const std::string& name, int channels);

    ImageTensor forward(const ImageTensor& x, NormCtx& ctx) const;
    ImageTensor backward(const ImageTensor& grad_out, const NormCtx& ctx, std::vector<double>& gg,
                         std::vector<double>& gb) const;

    ParamTensor gamma, beta;
    int channels = 0;

    static constexpr double kEps = 1e-5;
};

// Activations. Backward takes the saved pre-activation tensor.
ImageTensor relu(const ImageTensor& x);
ImageTensor relu_backward(const ImageTensor& grad_out, const ImageTensor& pre);
ImageTensor leaky_relu(const ImageTensor& x, double slope);
ImageTensor leaky_relu_backward(const ImageTensor& grad_out, const ImageTensor& pre, double slope);

// Nearest-neighbour 2x upsampling.
ImageTensor upsample2x(const ImageTensor& x);
ImageTensor upsample2x_backward(const ImageTensor& grad_out);

/// Sinusoidal timestep embedding of even dimension `dim`:
/// [sin(t*f_0)..sin(t*f_{h-1}), cos(t*f_0)..cos(t*f_{h-1})] with
/// f_i = exp(-ln(10000) * i / (h-1)), h = dim/2.
std::vector<double> sinusoidal_embedding(int t, int dim);

/// Linear map of the time embedding to a per-channel bias.
class TimeBias {
  public:
    TimeBias() = default;
    TimeBias(const std::string& name, int embed_dim, int channels);

    void init_kaiming(SeededRng& rng);

    /// Adds W*emb + b to every pixel of the matching channel, in place.
    void apply(ImageTensor& x, const std::vector<double>& emb) const;
    /// Accumulates gw/gb from grad_out (gradient wrt this layer's output).
    void backward(const ImageTensor& grad_out, const std::vector<double>& emb,
                  std::vector<double>& gw, std::vector<double>& gb) const;

    ParamTensor w, b;  // w: [channels][embed_dim]
    int embed_dim = 0, channels = 0;
};

} // namespace difflle::nnet
