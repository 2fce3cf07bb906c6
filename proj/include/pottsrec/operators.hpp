#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pottsrec/image.hpp"

namespace pottsrec {

enum class GeometryTag { radon, spherical, image };

/// Element of the data space: a sinogram (rows = angles, cols = offsets or
/// radii) or an image-shaped volume with C channels.
struct DataVolume {
    GeometryTag tag = GeometryTag::image;
    int rows = 0;
    int cols = 0;
    int channels = 1;
    std::vector<double> data;

    DataVolume() = default;
    DataVolume(GeometryTag t, int r, int c, int ch = 1)
        : tag(t), rows(r), cols(c), channels(ch), data(static_cast<size_t>(r) * c * ch, 0.0) {}

    double& at(int r, int c, int ch = 0) {
        return data[(static_cast<size_t>(r) * cols + c) * channels + ch];
    }
    double at(int r, int c, int ch = 0) const {
        return data[(static_cast<size_t>(r) * cols + c) * channels + ch];
    }
    size_t size() const { return data.size(); }
};

inline double dot(const DataVolume& a, const DataVolume& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a.data[i] * b.data[i];
    return s;
}
inline double norm2(const DataVolume& a) { return std::sqrt(dot(a, a)); }

/// Parallel-beam geometry: angles in [0, pi), detector offsets spanning the
/// diagonal of the [-1,1]^2 image domain, symmetric about 0.
struct RadonGeometry {
    std::vector<double> angles;
    std::vector<double> offsets;

    static RadonGeometry uniform(int num_angles, int num_detectors);
    int num_angles() const { return static_cast<int>(angles.size()); }
    int num_detectors() const { return static_cast<int>(offsets.size()); }
};

/// Circle centers theta(phi) on the unit circle, radii in (0, 2].
struct SphericalGeometry {
    std::vector<double> center_angles;
    std::vector<double> radii;

    static SphericalGeometry uniform(int num_angles, int num_radii);
    int num_angles() const { return static_cast<int>(center_angles.size()); }
    int num_radii() const { return static_cast<int>(radii.size()); }
};

struct ConvolutionKernel {
    int kw = 1, kh = 1;   // taps stored row-major, kh x kw
    int cx = 0, cy = 0;   // anchor
    std::vector<double> taps;  // nonnegative, sum to 1

    static ConvolutionKernel gaussian(double sigma);
    static ConvolutionKernel motion_horizontal(int length);
    static ConvolutionKernel delta();
};

namespace detail {
/// Row-compressed matrix of a discretized integral operator; apply is a
/// gather per row, adjoint the matching scatter.
struct SparseRows {
    std::vector<size_t> row_ptr;
    std::vector<int> col;
    std::vector<double> val;

    void gather(const std::vector<double>& x, std::vector<double>& y) const;
    void scatter(const std::vector<double>& y, std::vector<double>& x) const;
};
}  // namespace detail

/// Linear operator A with its exact algebraic transpose as adjoint.
class ForwardOperator {
public:
    virtual ~ForwardOperator() = default;
    virtual DataVolume apply(const Image& u) const = 0;
    virtual Image adjoint(const DataVolume& f) const = 0;
    virtual int image_width() const = 0;
    virtual int image_height() const = 0;
    virtual int image_channels() const { return 1; }
};

class RadonOperator : public ForwardOperator {
public:
    RadonOperator(RadonGeometry geometry, int n);
    DataVolume apply(const Image& u) const override;
    Image adjoint(const DataVolume& f) const override;
    int image_width() const override { return n_; }
    int image_height() const override { return n_; }
    const RadonGeometry& geometry() const { return geom_; }

private:
    RadonGeometry geom_;
    int n_;
    detail::SparseRows rows_;
};

class SphericalOperator : public ForwardOperator {
public:
    SphericalOperator(SphericalGeometry geometry, int n);
    DataVolume apply(const Image& u) const override;
    Image adjoint(const DataVolume& f) const override;
    int image_width() const override { return n_; }
    int image_height() const override { return n_; }
    const SphericalGeometry& geometry() const { return geom_; }

private:
    SphericalGeometry geom_;
    int n_;
    detail::SparseRows rows_;
};

/// Channelwise periodic-boundary convolution.
class ConvolutionOperator : public ForwardOperator {
public:
    ConvolutionOperator(ConvolutionKernel kernel, int width, int height, int channels);
    DataVolume apply(const Image& u) const override;
    Image adjoint(const DataVolume& f) const override;
    int image_width() const override { return width_; }
    int image_height() const override { return height_; }
    int image_channels() const override { return channels_; }
    const ConvolutionKernel& kernel() const { return kernel_; }

private:
    ConvolutionKernel kernel_;
    int width_, height_, channels_;
};

class IdentityOperator : public ForwardOperator {
public:
    IdentityOperator(int width, int height, int channels = 1)
        : width_(width), height_(height), channels_(channels) {}
    DataVolume apply(const Image& u) const override;
    Image adjoint(const DataVolume& f) const override;
    int image_width() const override { return width_; }
    int image_height() const override { return height_; }
    int image_channels() const override { return channels_; }

private:
    int width_, height_, channels_;
};

Image image_from_volume(const DataVolume& f);
DataVolume volume_from_image(const Image& u);

// Wraps an operator as c*A. Scaling both the operator and the data by
// c = 1/sqrt(#measurements) turns the data term into a mean-squared error,
// which keeps the coupling schedule's effective speed independent of the
// measurement count.
class ScaledOperator : public ForwardOperator {
public:
    ScaledOperator(const ForwardOperator& op, double scale) : op_(op), scale_(scale) {}
    DataVolume apply(const Image& u) const override;
    Image adjoint(const DataVolume& f) const override;
    int image_width() const override { return op_.image_width(); }
    int image_height() const override { return op_.image_height(); }
    int image_channels() const override { return op_.image_channels(); }
    double scale() const { return scale_; }

private:
    const ForwardOperator& op_;
    double scale_;
};

// Scale factor for a mean-squared data term on measurements shaped like f.
double mean_square_scale(const DataVolume& f);

}  // namespace pottsrec
