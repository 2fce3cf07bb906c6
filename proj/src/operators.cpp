#include "pottsrec/operators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pottsrec {

namespace {

constexpr double kDiag = 1.4142135623730951;  // half-diagonal of [-1,1]^2

// Visit the bilinear interpolation stencil of a physical point; weights of
// out-of-domain neighbors are dropped (image is zero outside).
template <typename Fn>
inline void bilinear_visit(double x, double y, int n, double pixel, Fn&& fn) {
    double fx = (x + 1.0) / pixel - 0.5;
    double fy = (y + 1.0) / pixel - 0.5;
    int ix = static_cast<int>(std::floor(fx));
    int iy = static_cast<int>(std::floor(fy));
    double ax = fx - ix;
    double ay = fy - iy;
    const double w[4] = {(1 - ax) * (1 - ay), ax * (1 - ay), (1 - ax) * ay, ax * ay};
    const int xs[4] = {ix, ix + 1, ix, ix + 1};
    const int ys[4] = {iy, iy, iy + 1, iy + 1};
    for (int k = 0; k < 4; ++k) {
        if (xs[k] < 0 || xs[k] >= n || ys[k] < 0 || ys[k] >= n) continue;
        fn(static_cast<size_t>(ys[k]) * n + xs[k], w[k]);
    }
}

}  // namespace

namespace detail {

void SparseRows::gather(const std::vector<double>& x, std::vector<double>& y) const {
    const size_t rows = row_ptr.size() - 1;
    for (size_t r = 0; r < rows; ++r) {
        double acc = 0.0;
        for (size_t i = row_ptr[r]; i < row_ptr[r + 1]; ++i) acc += val[i] * x[col[i]];
        y[r] = acc;
    }
}

void SparseRows::scatter(const std::vector<double>& y, std::vector<double>& x) const {
    const size_t rows = row_ptr.size() - 1;
    for (size_t r = 0; r < rows; ++r) {
        double v = y[r];
        if (v == 0.0) continue;
        for (size_t i = row_ptr[r]; i < row_ptr[r + 1]; ++i) x[col[i]] += val[i] * v;
    }
}

}  // namespace detail

RadonGeometry RadonGeometry::uniform(int num_angles, int num_detectors) {
    if (num_angles < 1 || num_detectors < 2)
        throw std::invalid_argument("RadonGeometry: invalid counts");
    RadonGeometry g;
    g.angles.resize(num_angles);
    for (int i = 0; i < num_angles; ++i) g.angles[i] = std::numbers::pi * i / num_angles;
    g.offsets.resize(num_detectors);
    for (int j = 0; j < num_detectors; ++j)
        g.offsets[j] = -kDiag + 2.0 * kDiag * j / (num_detectors - 1);
    return g;
}

SphericalGeometry SphericalGeometry::uniform(int num_angles, int num_radii) {
    if (num_angles < 1 || num_radii < 1)
        throw std::invalid_argument("SphericalGeometry: invalid counts");
    SphericalGeometry g;
    g.center_angles.resize(num_angles);
    for (int i = 0; i < num_angles; ++i)
        g.center_angles[i] = 2.0 * std::numbers::pi * i / num_angles;
    g.radii.resize(num_radii);
    for (int j = 0; j < num_radii; ++j) g.radii[j] = 2.0 * (j + 1) / num_radii;
    return g;
}

// Rays are traced once at construction; each sinogram row becomes a sparse
// row of bilinear taps sampled at one-pixel spacing along the ray, scaled by
// the step length.
RadonOperator::RadonOperator(RadonGeometry geometry, int n) : geom_(std::move(geometry)), n_(n) {
    if (n < 2) throw std::invalid_argument("RadonOperator: image side too small");
    const double pixel = 2.0 / n_;
    const int steps = static_cast<int>(std::ceil(2.0 * kDiag / pixel));
    rows_.row_ptr.push_back(0);
    for (int a = 0; a < geom_.num_angles(); ++a) {
        double ct = std::cos(geom_.angles[a]);
        double st = std::sin(geom_.angles[a]);
        for (int d = 0; d < geom_.num_detectors(); ++d) {
            double s = geom_.offsets[d];
            for (int k = 0; k <= steps; ++k) {
                double t = -kDiag + k * pixel;
                double x = s * ct - t * st;
                double y = s * st + t * ct;
                bilinear_visit(x, y, n_, pixel, [&](size_t idx, double w) {
                    rows_.col.push_back(static_cast<int>(idx));
                    rows_.val.push_back(w * pixel);
                });
            }
            rows_.row_ptr.push_back(rows_.col.size());
        }
    }
}

DataVolume RadonOperator::apply(const Image& u) const {
    if (u.width != n_ || u.height != n_ || u.channels != 1)
        throw std::invalid_argument("radon_apply: image/geometry mismatch (expects single-channel n x n)");
    DataVolume f(GeometryTag::radon, geom_.num_angles(), geom_.num_detectors());
    rows_.gather(u.data, f.data);
    return f;
}

Image RadonOperator::adjoint(const DataVolume& f) const {
    if (f.tag != GeometryTag::radon || f.rows != geom_.num_angles() || f.cols != geom_.num_detectors())
        throw std::invalid_argument("radon_adjoint: data/geometry mismatch");
    Image u(n_, n_, 1);
    rows_.scatter(f.data, u.data);
    return u;
}

SphericalOperator::SphericalOperator(SphericalGeometry geometry, int n)
    : geom_(std::move(geometry)), n_(n) {
    if (n < 2) throw std::invalid_argument("SphericalOperator: image side too small");
    for (double t : geom_.radii)
        if (!(t > 0.0 && t <= 2.0))
            throw std::invalid_argument("SphericalOperator: radii must lie in (0,2]");
    const double pixel = 2.0 / n_;
    rows_.row_ptr.push_back(0);
    for (int a = 0; a < geom_.num_angles(); ++a) {
        double cx = std::cos(geom_.center_angles[a]);
        double cy = std::sin(geom_.center_angles[a]);
        for (int r = 0; r < geom_.num_radii(); ++r) {
            double t = geom_.radii[r];
            int m = std::max(8, static_cast<int>(std::ceil(2.0 * std::numbers::pi * t / pixel)));
            double w = 2.0 * std::numbers::pi / m;
            for (int k = 0; k < m; ++k) {
                double z = 2.0 * std::numbers::pi * k / m;
                double x = cx + t * std::cos(z);
                double y = cy + t * std::sin(z);
                bilinear_visit(x, y, n_, pixel, [&](size_t idx, double bw) {
                    rows_.col.push_back(static_cast<int>(idx));
                    rows_.val.push_back(bw * w);
                });
            }
            rows_.row_ptr.push_back(rows_.col.size());
        }
    }
}

// Circle integral with measure d(zeta) over the unit parameter circle: the
// quadrature weight is 2*pi/M, with M chosen so samples are about one pixel
// apart in arc length.
DataVolume SphericalOperator::apply(const Image& u) const {
    if (u.width != n_ || u.height != n_ || u.channels != 1)
        throw std::invalid_argument("spherical_apply: image/geometry mismatch");
    DataVolume f(GeometryTag::spherical, geom_.num_angles(), geom_.num_radii());
    rows_.gather(u.data, f.data);
    return f;
}

Image SphericalOperator::adjoint(const DataVolume& f) const {
    if (f.tag != GeometryTag::spherical || f.rows != geom_.num_angles() || f.cols != geom_.num_radii())
        throw std::invalid_argument("spherical_adjoint: data/geometry mismatch");
    Image u(n_, n_, 1);
    rows_.scatter(f.data, u.data);
    return u;
}

ConvolutionKernel ConvolutionKernel::gaussian(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian kernel: sigma must be positive");
    int r = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    ConvolutionKernel k;
    k.kw = k.kh = 2 * r + 1;
    k.cx = k.cy = r;
    k.taps.resize(static_cast<size_t>(k.kw) * k.kh);
    double sum = 0.0;
    for (int j = 0; j < k.kh; ++j)
        for (int i = 0; i < k.kw; ++i) {
            double dx = i - r, dy = j - r;
            double v = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            k.taps[static_cast<size_t>(j) * k.kw + i] = v;
            sum += v;
        }
    for (double& v : k.taps) v /= sum;
    return k;
}

ConvolutionKernel ConvolutionKernel::motion_horizontal(int length) {
    if (length < 1) throw std::invalid_argument("motion kernel: length must be positive");
    ConvolutionKernel k;
    k.kw = length;
    k.kh = 1;
    k.cx = length / 2;
    k.cy = 0;
    k.taps.assign(length, 1.0 / length);
    return k;
}

ConvolutionKernel ConvolutionKernel::delta() {
    ConvolutionKernel k;
    k.taps = {1.0};
    return k;
}

ConvolutionOperator::ConvolutionOperator(ConvolutionKernel kernel, int width, int height, int channels)
    : kernel_(std::move(kernel)), width_(width), height_(height), channels_(channels) {
    if (kernel_.kw > width_ || kernel_.kh > height_)
        throw std::invalid_argument("ConvolutionOperator: kernel larger than image");
}

DataVolume ConvolutionOperator::apply(const Image& u) const {
    if (u.width != width_ || u.height != height_ || u.channels != channels_)
        throw std::invalid_argument("convolve_apply: image mismatch");
    DataVolume f(GeometryTag::image, height_, width_, channels_);
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x)
            for (int j = 0; j < kernel_.kh; ++j)
                for (int i = 0; i < kernel_.kw; ++i) {
                    double tap = kernel_.taps[static_cast<size_t>(j) * kernel_.kw + i];
                    int sx = ((x - (i - kernel_.cx)) % width_ + width_) % width_;
                    int sy = ((y - (j - kernel_.cy)) % height_ + height_) % height_;
                    for (int c = 0; c < channels_; ++c)
                        f.at(y, x, c) += tap * u.at(sx, sy, c);
                }
    return f;
}

Image ConvolutionOperator::adjoint(const DataVolume& f) const {
    if (f.tag != GeometryTag::image || f.rows != height_ || f.cols != width_ || f.channels != channels_)
        throw std::invalid_argument("convolve_adjoint: data mismatch");
    Image u(width_, height_, channels_);
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x)
            for (int j = 0; j < kernel_.kh; ++j)
                for (int i = 0; i < kernel_.kw; ++i) {
                    double tap = kernel_.taps[static_cast<size_t>(j) * kernel_.kw + i];
                    int sx = ((x + (i - kernel_.cx)) % width_ + width_) % width_;
                    int sy = ((y + (j - kernel_.cy)) % height_ + height_) % height_;
                    for (int c = 0; c < channels_; ++c)
                        u.at(x, y, c) += tap * f.at(sy, sx, c);
                }
    return u;
}

DataVolume IdentityOperator::apply(const Image& u) const {
    if (u.width != width_ || u.height != height_ || u.channels != channels_)
        throw std::invalid_argument("identity apply: image mismatch");
    return volume_from_image(u);
}

Image IdentityOperator::adjoint(const DataVolume& f) const {
    if (f.rows != height_ || f.cols != width_ || f.channels != channels_)
        throw std::invalid_argument("identity adjoint: data mismatch");
    return image_from_volume(f);
}

Image image_from_volume(const DataVolume& f) {
    Image u(f.cols, f.rows, f.channels);
    u.data = f.data;
    return u;
}

DataVolume volume_from_image(const Image& u) {
    DataVolume f(GeometryTag::image, u.height, u.width, u.channels);
    f.data = u.data;
    return f;
}

DataVolume ScaledOperator::apply(const Image& u) const {
    DataVolume f = op_.apply(u);
    for (double& v : f.data) v *= scale_;
    return f;
}

Image ScaledOperator::adjoint(const DataVolume& f) const {
    DataVolume g = f;
    for (double& v : g.data) v *= scale_;
    return op_.adjoint(g);
}

double mean_square_scale(const DataVolume& f) {
    return 1.0 / std::sqrt(static_cast<double>(f.data.size()));
}

}  // namespace pottsrec
