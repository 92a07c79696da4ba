#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace difflle {

/// Planar channel-major raster: data[(c*height + y)*width + x].
/// Images live in [0,1]; latents and gradients are unbounded.
/// Immutable by convention once handed to another component.
struct ImageTensor {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;

    ImageTensor() = default;
    ImageTensor(int c, int h, int w, double fill = 0.0);

    std::size_t size() const { return data.size(); }
    bool same_shape(const ImageTensor& o) const {
        return channels == o.channels && height == o.height && width == o.width;
    }
    std::string shape_str() const;

    double& at(int c, int y, int x) {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    double at(int c, int y, int x) const {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    double* plane(int c) { return data.data() + static_cast<std::size_t>(c) * height * width; }
    const double* plane(int c) const {
        return data.data() + static_cast<std::size_t>(c) * height * width;
    }
};

void require_same_shape(const ImageTensor& a, const ImageTensor& b, const char* where);

/// Elementwise min(max(v,0),1). Idempotent.
ImageTensor clamp01(const ImageTensor& t);

// Elementwise helpers shared by the diffusion and training code.
ImageTensor scale_add(double ka, const ImageTensor& a, double kb, const ImageTensor& b);
ImageTensor scale(const ImageTensor& a, double k);
ImageTensor add(const ImageTensor& a, const ImageTensor& b);
ImageTensor sub(const ImageTensor& a, const ImageTensor& b);
double mean_abs_diff(const ImageTensor& a, const ImageTensor& b);
double mean(const ImageTensor& a);

} // namespace difflle
