#include "difflle/tensor.hpp"

#include <algorithm>

namespace difflle {

ImageTensor::ImageTensor(int c, int h, int w, double fill) : channels(c), height(h), width(w) {
    if (c <= 0 || h <= 0 || w <= 0)
        throw std::invalid_argument("ImageTensor: dimensions must be positive, got " +
                                    std::to_string(c) + "x" + std::to_string(h) + "x" +
                                    std::to_string(w));
    data.assign(static_cast<std::size_t>(c) * h * w, fill);
}

std::string ImageTensor::shape_str() const {
    return std::to_string(channels) + "x" + std::to_string(height) + "x" + std::to_string(width);
}

void require_same_shape(const ImageTensor& a, const ImageTensor& b, const char* where) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(where) + ": shape mismatch " + a.shape_str() +
                                    " vs " + b.shape_str());
}

ImageTensor clamp01(const ImageTensor& t) {
    ImageTensor out = t;
    for (double& v : out.data) v = std::min(std::max(v, 0.0), 1.0);
    return out;
}

ImageTensor scale_add(double ka, const ImageTensor& a, double kb, const ImageTensor& b) {
    require_same_shape(a, b, "scale_add");
    ImageTensor out(a.channels, a.height, a.width);
    for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = ka * a.data[i] + kb * b.data[i];
    return out;
}

ImageTensor scale(const ImageTensor& a, double k) {
    ImageTensor out = a;
    for (double& v : out.data) v *= k;
    return out;
}

ImageTensor add(const ImageTensor& a, const ImageTensor& b) { return scale_add(1.0, a, 1.0, b); }

ImageTensor sub(const ImageTensor& a, const ImageTensor& b) { return scale_add(1.0, a, -1.0, b); }

double mean_abs_diff(const ImageTensor& a, const ImageTensor& b) {
    require_same_shape(a, b, "mean_abs_diff");
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) s += std::abs(a.data[i] - b.data[i]);
    return s / static_cast<double>(a.data.size());
}

double mean(const ImageTensor& a) {
    double s = 0.0;
    for (double v : a.data) s += v;
    return s / static_cast<double>(a.data.size());
}

} // namespace difflle
