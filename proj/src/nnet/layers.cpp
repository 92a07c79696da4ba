#include "difflle/nnet/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace difflle::nnet {

namespace {
inline int reflect(int i, int n) {
    if (i < 0) return -i;
    if (i >= n) return 2 * n - 2 - i;
    return i;
}
} // namespace

ImageTensor pad_reflect(const ImageTensor& x, int p) {
    if (p == 0) return x;
    if (x.height < 2 || x.width < 2)
        throw std::invalid_argument("pad_reflect: image too small for reflection");
    ImageTensor out(x.channels, x.height + 2 * p, x.width + 2 * p);
    for (int c = 0; c < x.channels; ++c) {
        const double* src = x.plane(c);
        double* dst = out.plane(c);
        for (int y = 0; y < out.height; ++y) {
            int sy = reflect(y - p, x.height);
            const double* srow = src + static_cast<std::size_t>(sy) * x.width;
            double* drow = dst + static_cast<std::size_t>(y) * out.width;
            for (int xx = 0; xx < out.width; ++xx) drow[xx] = srow[reflect(xx - p, x.width)];
        }
    }
    return out;
}

ImageTensor pad_reflect_backward(const ImageTensor& g_padded, int p, int orig_h, int orig_w) {
    if (p == 0) return g_padded;
    ImageTensor g(g_padded.channels, orig_h, orig_w);
    for (int c = 0; c < g.channels; ++c) {
        const double* src = g_padded.plane(c);
        double* dst = g.plane(c);
        for (int y = 0; y < g_padded.height; ++y) {
            int sy = reflect(y - p, orig_h);
            const double* srow = src + static_cast<std::size_t>(y) * g_padded.width;
            double* drow = dst + static_cast<std::size_t>(sy) * orig_w;
            for (int xx = 0; xx < g_padded.width; ++xx) drow[reflect(xx - p, orig_w)] += srow[xx];
        }
    }
    return g;
}

Conv2d::Conv2d(const std::string& name, int in_ch, int out_ch, int ksize, int stride_, int pad_)
    : ci(in_ch), co(out_ch), k(ksize), stride(stride_), pad(pad_) {
    w.name = name + ".w";
    w.shape = {out_ch, in_ch, ksize, ksize};
    w.resize_to_shape();
    b.name = name + ".b";
    b.shape = {out_ch};
    b.resize_to_shape();
}

void Conv2d::init_kaiming(SeededRng& rng) {
    double std = std::sqrt(2.0 / (static_cast<double>(ci) * k * k));
    for (double& x : w.v) x = std * rng.gaussian();
    for (double& x : b.v) x = 0.0;
}

void Conv2d::init_zero() {
    for (double& x : w.v) x = 0.0;
    for (double& x : b.v) x = 0.0;
}

ImageTensor Conv2d::forward(const ImageTensor& x, ConvCtx& ctx) const {
    if (x.channels != ci)
        throw std::invalid_argument("Conv2d " + w.name + ": expected " + std::to_string(ci) +
                                    " channels, got " + std::to_string(x.channels));
    ctx.padded_in = pad_reflect(x, pad);
    const ImageTensor& pin = ctx.padded_in;
    int oh = out_dim(x.height), ow = out_dim(x.width);
    if (oh <= 0 || ow <= 0)
        throw std::invalid_argument("Conv2d " + w.name + ": input too small");

    ImageTensor out(co, oh, ow);
    const int PW = pin.width;
    for (int o = 0; o < co; ++o) {
        double* oplane = out.plane(o);
        double bias = b.v[o];
        for (int i = 0; i < static_cast<int>(out.height) * ow; ++i) oplane[i] = bias;
        for (int c = 0; c < ci; ++c) {
            const double* iplane = pin.plane(c);
            const double* wrow = &w.v[((static_cast<std::size_t>(o) * ci + c) * k) * k];
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    double wv = wrow[ky * k + kx];
                    for (int oy = 0; oy < oh; ++oy) {
                        const double* irow =
                            iplane + static_cast<std::size_t>(oy * stride + ky) * PW + kx;
                        double* orow = oplane + static_cast<std::size_t>(oy) * ow;
                        if (stride == 1) {
                            for (int ox = 0; ox < ow; ++ox) orow[ox] += wv * irow[ox];
                        } else {
                            for (int ox = 0; ox < ow; ++ox) orow[ox] += wv * irow[ox * stride];
                        }
                    }
                }
            }
        }
    }
    return out;
}

ImageTensor Conv2d::backward(const ImageTensor& grad_out, const ConvCtx& ctx,
                             std::vector<double>& gw, std::vector<double>& gb) const {
    const ImageTensor& pin = ctx.padded_in;
    if (pin.size() == 0) throw std::runtime_error("Conv2d " + w.name + ": backward without forward");
    if (grad_out.channels != co)
        throw std::invalid_argument("Conv2d " + w.name + ": grad_out channel mismatch");
    if (gw.size() != w.v.size() || gb.size() != b.v.size())
        throw std::invalid_argument("Conv2d " + w.name + ": gradient buffer size mismatch");

    int oh = grad_out.height, ow = grad_out.width;
    const int PW = pin.width;
    ImageTensor gpad(pin.channels, pin.height, pin.width);

    for (int o = 0; o < co; ++o) {
        const double* gplane = grad_out.plane(o);
        double s = 0.0;
        for (int i = 0; i < oh * ow; ++i) s += gplane[i];
        gb[o] += s;
        for (int c = 0; c < ci; ++c) {
            const double* iplane = pin.plane(c);
            double* gip = gpad.plane(c);
            double* gwrow = &gw[((static_cast<std::size_t>(o) * ci + c) * k) * k];
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    double wv = w.v[((static_cast<std::size_t>(o) * ci + c) * k + ky) * k + kx];
                    double acc = 0.0;
                    for (int oy = 0; oy < oh; ++oy) {
                        const double* irow =
                            iplane + static_cast<std::size_t>(oy * stride + ky) * PW + kx;
                        double* girow = gip + static_cast<std::size_t>(oy * stride + ky) * PW + kx;
                        const double* grow = gplane + static_cast<std::size_t>(oy) * ow;
                        if (stride == 1) {
                            for (int ox = 0; ox < ow; ++ox) {
                                acc += grow[ox] * irow[ox];
                                girow[ox] += wv * grow[ox];
                            }
                        } else {
                            for (int ox = 0; ox < ow; ++ox) {
                                acc += grow[ox] * irow[ox * stride];
                                girow[ox * stride] += wv * grow[ox];
                            }
                        }
                    }
                    gwrow[ky * k + kx] += acc;
                }
            }
        }
    }
    int orig_h = pin.height - 2 * pad, orig_w = pin.width - 2 * pad;
    return pad_reflect_backward(gpad, pad, orig_h, orig_w);
}

InstanceNorm::InstanceNorm(const std::string& name, int ch) : channels(ch) {
    gamma.name = name + ".g";
    gamma.shape = {ch};
    gamma.v.assign(ch, 1.0);
    beta.name = name + ".b";
    beta.shape = {ch};
    beta.v.assign(ch, 0.0);
}

ImageTensor InstanceNorm::forward(const ImageTensor& x, NormCtx& ctx) const {
    if (x.channels != channels) throw std::invalid_argument("InstanceNorm: channel mismatch");
    int n = x.height * x.width;
    ImageTensor out(x.channels, x.height, x.width);
    ctx.xhat = ImageTensor(x.channels, x.height, x.width);
    ctx.inv_std.assign(channels, 0.0);
    for (int c = 0; c < channels; ++c) {
        const double* p = x.plane(c);
        double mu = 0.0;
        for (int i = 0; i < n; ++i) mu += p[i];
        mu /= n;
        double var = 0.0;
        for (int i = 0; i < n; ++i) var += (p[i] - mu) * (p[i] - mu);
        var /= n;
        double inv = 1.0 / std::sqrt(var + kEps);
        ctx.inv_std[c] = inv;
        double* xh = ctx.xhat.plane(c);
        double* op = out.plane(c);
        double g = gamma.v[c], bb = beta.v[c];
        for (int i = 0; i < n; ++i) {
            xh[i] = (p[i] - mu) * inv;
            op[i] = g * xh[i] + bb;
        }
    }
    return out;
}

ImageTensor InstanceNorm::backward(const ImageTensor& grad_out, const NormCtx& ctx,
                                   std::vector<double>& gg, std::vector<double>& gb) const {
    if (ctx.xhat.size() == 0) throw std::runtime_error("InstanceNorm: backward without forward");
    int n = grad_out.height * grad_out.width;
    ImageTensor gin(grad_out.channels, grad_out.height, grad_out.width);
    for (int c = 0; c < channels; ++c) {
        const double* go = grad_out.plane(c);
        const double* xh = ctx.xhat.plane(c);
        double sum_go = 0.0, sum_goxh = 0.0;
        for (int i = 0; i < n; ++i) {
            sum_go += go[i];
            sum_goxh += go[i] * xh[i];
        }
        gg[c] += sum_goxh;
        gb[c] += sum_go;
        // d/dx of (x-mu)/std with both mu and std functions of x.
        double g = gamma.v[c], inv = ctx.inv_std[c];
        double mean_go = sum_go / n, mean_goxh = sum_goxh / n;
        double* gi = gin.plane(c);
        for (int i = 0; i < n; ++i)
            gi[i] = g * inv * (go[i] - mean_go - xh[i] * mean_goxh);
    }
    return gin;
}

ImageTensor relu(const ImageTensor& x) {
    ImageTensor out = x;
    for (double& v : out.data) v = v > 0.0 ? v : 0.0;
    return out;
}

ImageTensor relu_backward(const ImageTensor& grad_out, const ImageTensor& pre) {
    require_same_shape(grad_out, pre, "relu_backward");
    ImageTensor g = grad_out;
    for (std::size_t i = 0; i < g.data.size(); ++i)
        if (pre.data[i] <= 0.0) g.data[i] = 0.0;
    return g;
}

ImageTensor leaky_relu(const ImageTensor& x, double slope) {
    ImageTensor out = x;
    for (double& v : out.data) v = v > 0.0 ? v : slope * v;
    return out;
}

ImageTensor leaky_relu_backward(const ImageTensor& grad_out, const ImageTensor& pre,
                                double slope) {
    require_same_shape(grad_out, pre, "leaky_relu_backward");
    ImageTensor g = grad_out;
    for (std::size_t i = 0; i < g.data.size(); ++i)
        if (pre.data[i] <= 0.0) g.data[i] *= slope;
    return g;
}

ImageTensor upsample2x(const ImageTensor& x) {
    ImageTensor out(x.channels, x.height * 2, x.width * 2);
    for (int c = 0; c < x.channels; ++c) {
        const double* src = x.plane(c);
        double* dst = out.plane(c);
        for (int y = 0; y < out.height; ++y) {
            const double* srow = src + static_cast<std::size_t>(y / 2) * x.width;
            double* drow = dst + static_cast<std::size_t>(y) * out.width;
            for (int xx = 0; xx < out.width; ++xx) drow[xx] = srow[xx / 2];
        }
    }
    return out;
}

ImageTensor upsample2x_backward(const ImageTensor& grad_out) {
    if (grad_out.height % 2 || grad_out.width % 2)
        throw std::invalid_argument("upsample2x_backward: odd dimensions");
    ImageTensor g(grad_out.channels, grad_out.height / 2, grad_out.width / 2);
    for (int c = 0; c < g.channels; ++c) {
        const double* src = grad_out.plane(c);
        double* dst = g.plane(c);
        for (int y = 0; y < grad_out.height; ++y) {
            const double* srow = src + static_cast<std::size_t>(y) * grad_out.width;
            double* drow = dst + static_cast<std::size_t>(y / 2) * g.width;
            for (int xx = 0; xx < grad_out.width; ++xx) drow[xx / 2] += srow[xx];
        }
    }
    return g;
}

std::vector<double> sinusoidal_embedding(int t, int dim) {
    if (dim < 2 || dim % 2) throw std::invalid_argument("sinusoidal_embedding: dim must be even");
    int half = dim / 2;
    std::vector<double> emb(dim);
    for (int i = 0; i < half; ++i) {
        double f = half > 1 ? std::exp(-std::log(10000.0) * i / (half - 1)) : 1.0;
        emb[i] = std::sin(t * f);
        emb[half + i] = std::cos(t * f);
    }
    return emb;
}

TimeBias::TimeBias(const std::string& name, int embed_dim_, int channels_)
    : embed_dim(embed_dim_), channels(channels_) {
    w.name = name + ".w";
    w.shape = {channels_, embed_dim_};
    w.resize_to_shape();
    b.name = name + ".b";
    b.shape = {channels_};
    b.resize_to_shape();
}

void TimeBias::init_kaiming(SeededRng& rng) {
    double std = std::sqrt(2.0 / embed_dim);
    for (double& x : w.v) x = std * rng.gaussian();
    for (double& x : b.v) x = 0.0;
}

void TimeBias::apply(ImageTensor& x, const std::vector<double>& emb) const {
    if (x.channels != channels || static_cast<int>(emb.size()) != embed_dim)
        throw std::invalid_argument("TimeBias: shape mismatch");
    int n = x.height * x.width;
    for (int c = 0; c < channels; ++c) {
        double bias = b.v[c];
        const double* wrow = &w.v[static_cast<std::size_t>(c) * embed_dim];
        for (int e = 0; e < embed_dim; ++e) bias += wrow[e] * emb[e];
        double* p = x.plane(c);
        for (int i = 0; i < n; ++i) p[i] += bias;
    }
}

void TimeBias::backward(const ImageTensor& grad_out, const std::vector<double>& emb,
                        std::vector<double>& gw, std::vector<double>& gb) const {
    int n = grad_out.height * grad_out.width;
    for (int c = 0; c < channels; ++c) {
        const double* p = grad_out.plane(c);
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += p[i];
        gb[c] += s;
        double* gwrow = &gw[static_cast<std::size_t>(c) * embed_dim];
        for (int e = 0; e < embed_dim; ++e) gwrow[e] += s * emb[e];
    }
}

} // namespace difflle::nnet
