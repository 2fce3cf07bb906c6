#include "pottsrec/tikhonov.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace pottsrec {

namespace {

// normal-equation operator B(v) = A*(A v) + (w/2) v
Image apply_normal(const ForwardOperator& A, double w, const Image& v) {
    Image out = A.adjoint(A.apply(v));
    axpy(w / 2.0, v, out);
    return out;
}

size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

CgResult solve_cg(const ForwardOperator& A, const DataVolume& f, const Image& z, double w,
                  const CgConfig& config, const Image* warm_start) {
    if (!(w > 0.0)) throw std::invalid_argument("solve_cg: weight must be positive");
    Image rhs = A.adjoint(f);
    axpy(w / 2.0, z, rhs);
    const double rhs_norm = norm2(rhs);

    CgResult res;
    res.v = warm_start ? *warm_start : z;

    Image r = rhs;
    {
        Image bv = apply_normal(A, w, res.v);
        for (size_t i = 0; i < r.size(); ++i) r.data[i] -= bv.data[i];
    }
    Image p = r;
    double rr = dot(r, r);
    // absolute criterion against ||rhs||: a warm start near the solution
    // already satisfies it and exits in a handful of steps
    const double target = config.tolerance * (rhs_norm > 0.0 ? rhs_norm : 1.0);

    res.relative_residual = std::sqrt(rr) / (rhs_norm > 0.0 ? rhs_norm : 1.0);
    if (std::sqrt(rr) <= target) {
        res.converged = true;
        return res;
    }
    for (int it = 0; it < config.max_iterations; ++it) {
        Image bp = apply_normal(A, w, p);
        double pbp = dot(p, bp);
        if (pbp <= 0.0) break;  // numerically exhausted
        double alpha = rr / pbp;
        axpy(alpha, p, res.v);
        axpy(-alpha, bp, r);
        double rr_new = dot(r, r);
        res.iterations = it + 1;
        res.relative_residual = std::sqrt(rr_new) / (rhs_norm > 0.0 ? rhs_norm : 1.0);
        if (std::sqrt(rr_new) <= target) {
            res.converged = true;
            return res;
        }
        double beta = rr_new / rr;
        for (size_t i = 0; i < p.size(); ++i) p.data[i] = r.data[i] + beta * p.data[i];
        rr = rr_new;
    }
    return res;  // best iterate with converged = false
}

Image solve_deconv_frequency(const ConvolutionKernel& kernel, const DataVolume& f, const Image& z,
                             double w) {
    if (!(w > 0.0)) throw std::invalid_argument("solve_deconv_frequency: weight must be positive");
    if (f.tag != GeometryTag::image || f.rows != z.height || f.cols != z.width || f.channels != z.channels)
        throw std::invalid_argument("solve_deconv_frequency: shape mismatch");
    const int W = z.width, H = z.height, C = z.channels;
    const int nc = W / 2 + 1;  // r2c layout

    // kernel embedded at the origin with periodic wrap
    std::vector<double> kbuf(static_cast<size_t>(W) * H, 0.0);
    for (int j = 0; j < kernel.kh; ++j)
        for (int i = 0; i < kernel.kw; ++i) {
            int x = ((i - kernel.cx) % W + W) % W;
            int y = ((j - kernel.cy) % H + H) % H;
            kbuf[static_cast<size_t>(y) * W + x] += kernel.taps[static_cast<size_t>(j) * kernel.kw + i];
        }

    std::vector<std::complex<double>> khat(static_cast<size_t>(H) * nc);
    std::vector<std::complex<double>> spec(static_cast<size_t>(H) * nc);
    std::vector<double> real_buf(static_cast<size_t>(W) * H);

    fftw_plan fwd = fftw_plan_dft_r2c_2d(H, W, real_buf.data(),
                                         reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
    fftw_plan bwd = fftw_plan_dft_c2r_2d(H, W, reinterpret_cast<fftw_complex*>(spec.data()),
                                         real_buf.data(), FFTW_ESTIMATE);

    real_buf = kbuf;
    fftw_execute(fwd);
    khat = spec;

    Image v(W, H, C);
    std::vector<std::complex<double>> fhat(static_cast<size_t>(H) * nc);
    for (int c = 0; c < C; ++c) {
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) real_buf[static_cast<size_t>(y) * W + x] = f.at(y, x, c);
        fftw_execute(fwd);
        fhat = spec;
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) real_buf[static_cast<size_t>(y) * W + x] = z.at(x, y, c);
        fftw_execute(fwd);
        // per-frequency scalar normal equation
        for (size_t i = 0; i < spec.size(); ++i) {
            std::complex<double> zh = spec[i];
            spec[i] = (std::conj(khat[i]) * fhat[i] + (w / 2.0) * zh) /
                      (std::norm(khat[i]) + w / 2.0);
        }
        fftw_execute(bwd);
        const double inv = 1.0 / (static_cast<double>(W) * H);
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) v.at(x, y, c) = real_buf[static_cast<size_t>(y) * W + x] * inv;
    }
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    return v;
}

double filter_h_alpha(double r, double alpha) {
    double a = std::abs(r);
    return a / (4.0 * std::numbers::pi + alpha * a);
}

namespace {

// Filter each sinogram row along the detector axis with the Fourier
// multiplier h(r); rows are zero-padded to a power of two >= 2x length.
DataVolume filter_detector_axis(const DataVolume& f, const RadonGeometry& geom, double alpha,
                                bool ram_lak) {
    const int A = f.rows, D = f.cols;
    const size_t P = next_pow2(2 * static_cast<size_t>(D));
    const size_t nc = P / 2 + 1;
    const double ds = geom.offsets[1] - geom.offsets[0];

    std::vector<double> row(P);
    std::vector<std::complex<double>> spec(nc);
    fftw_plan fwd = fftw_plan_dft_r2c_1d(static_cast<int>(P), row.data(),
                                         reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
    fftw_plan bwd = fftw_plan_dft_c2r_1d(static_cast<int>(P), reinterpret_cast<fftw_complex*>(spec.data()),
                                         row.data(), FFTW_ESTIMATE);

    DataVolume out(GeometryTag::radon, A, D);
    for (int a = 0; a < A; ++a) {
        std::fill(row.begin(), row.end(), 0.0);
        for (int d = 0; d < D; ++d) row[d] = f.at(a, d);
        fftw_execute(fwd);
        for (size_t j = 0; j < nc; ++j) {
            double r = 2.0 * std::numbers::pi * static_cast<double>(j) / (static_cast<double>(P) * ds);
            double h = ram_lak ? std::abs(r) / (4.0 * std::numbers::pi) : filter_h_alpha(r, alpha);
            spec[j] *= h / static_cast<double>(P);  // fold in the FFT normalization
        }
        fftw_execute(bwd);
        for (int d = 0; d < D; ++d) out.at(a, d) = row[d];
    }
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    return out;
}

// The discrete adjoint is a plain transpose; the continuous backprojection
// integral carries the quadrature factors dtheta * ds / pixel area. The
// integral runs over the full circle while angles cover [0, pi) only, and
// parity of the sinogram accounts for the remaining factor 2.
Image continuous_backprojection(const DataVolume& g, const RadonOperator& op) {
    const RadonGeometry& geom = op.geometry();
    const double dtheta = std::numbers::pi / geom.num_angles();
    const double ds = geom.offsets[1] - geom.offsets[0];
    const double pixel = 2.0 / op.image_width();
    Image u = op.adjoint(g);
    scale(u, 2.0 * dtheta * ds / (pixel * pixel));
    return u;
}

}  // namespace

Image solve_radon_filtered(const DataVolume& f, const Image& z, double alpha,
                           const RadonOperator& op) {
    if (!(alpha > 0.0)) throw std::invalid_argument("solve_radon_filtered: alpha must be positive");
    DataVolume rz = op.apply(z);
    if (rz.rows != f.rows || rz.cols != f.cols)
        throw std::invalid_argument("solve_radon_filtered: geometry mismatch");
    DataVolume g = f;
    for (size_t i = 0; i < g.size(); ++i) g.data[i] -= rz.data[i];
    DataVolume filtered = filter_detector_axis(g, op.geometry(), alpha, false);
    Image v = continuous_backprojection(filtered, op);
    for (size_t i = 0; i < v.size(); ++i) v.data[i] += z.data[i];
    return v;
}

Image fbp_ram_lak(const DataVolume& f, const RadonOperator& op) {
    DataVolume filtered = filter_detector_axis(f, op.geometry(), 0.0, true);
    return continuous_backprojection(filtered, op);
}

double tikhonov_objective(const ForwardOperator& A, const DataVolume& f, const Image& z, double w,
                          const Image& v) {
    DataVolume av = A.apply(v);
    double fid = 0.0;
    for (size_t i = 0; i < av.size(); ++i) {
        double d = av.data[i] - f.data[i];
        fid += d * d;
    }
    double anchor = dist2(v, z);
    return fid + (w / 2.0) * anchor * anchor;
}

}  // namespace pottsrec
