#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pottsrec {

/// 2D image with C interleaved channels, row-major, physical extent [-1,1]^2.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<double> data;

    Image() = default;
    Image(int w, int h, int c = 1) : width(w), height(h), channels(c), data(static_cast<size_t>(w) * h * c, 0.0) {
        if (w <= 0 || h <= 0 || c <= 0) throw std::invalid_argument("Image: dimensions must be positive");
    }

    size_t size() const { return data.size(); }
    size_t pixels() const { return static_cast<size_t>(width) * height; }

    double& at(int x, int y, int c = 0) {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    double at(int x, int y, int c = 0) const {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }

    bool same_shape(const Image& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }

    static Image zeros_like(const Image& o) { return Image(o.width, o.height, o.channels); }
};

inline double dot(const Image& a, const Image& b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a.data[i] * b.data[i];
    return s;
}

inline double norm2(const Image& a) { return std::sqrt(dot(a, a)); }

inline double dist2(const Image& a, const Image& b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a.data[i] - b.data[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// elementwise y += alpha * x
inline void axpy(double alpha, const Image& x, Image& y) {
    assert(x.size() == y.size());
    for (size_t i = 0; i < x.size(); ++i) y.data[i] += alpha * x.data[i];
}

inline void scale(Image& x, double alpha) {
    for (double& v : x.data) v *= alpha;
}

}  // namespace pottsrec
