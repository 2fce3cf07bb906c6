#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "pottsrec/operators.hpp"
#include "pottsrec/tikhonov.hpp"

using namespace pottsrec;

namespace {

Image random_image(int w, int h, int c, unsigned seed) {
    Image u(w, h, c);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (double& v : u.data) v = val(rng);
    return u;
}

// Dense normal-equation solve as an independent oracle for tiny problems.
Image dense_tikhonov_oracle(const ForwardOperator& A, const DataVolume& f, const Image& z, double w) {
    const int n = static_cast<int>(z.size());
    // columns of A
    std::vector<DataVolume> col(n);
    for (int j = 0; j < n; ++j) {
        Image e(z.width, z.height, z.channels);
        e.data[j] = 1.0;
        col[j] = A.apply(e);
    }
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    std::vector<double> rhs(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m[i][j] = dot(col[i], col[j]) + (i == j ? w / 2.0 : 0.0);
        rhs[i] = dot(col[i], f) + (w / 2.0) * z.data[i];
    }
    for (int c2 = 0; c2 < n; ++c2) {
        int piv = c2;
        for (int r = c2 + 1; r < n; ++r)
            if (std::abs(m[r][c2]) > std::abs(m[piv][c2])) piv = r;
        std::swap(m[c2], m[piv]);
        std::swap(rhs[c2], rhs[piv]);
        for (int r = 0; r < n; ++r) {
            if (r == c2) continue;
            double fct = m[r][c2] / m[c2][c2];
            for (int k = c2; k < n; ++k) m[r][k] -= fct * m[c2][k];
            rhs[r] -= fct * rhs[c2];
        }
    }
    Image v = Image::zeros_like(z);
    for (int i = 0; i < n; ++i) v.data[i] = rhs[i] / m[i][i];
    return v;
}

}  // namespace

TEST_CASE("identity operator has the closed-form minimizer") {
    // min ||v - f||^2 + (w/2)||v - z||^2  =>  v = (f + (w/2) z) / (1 + w/2)
    IdentityOperator A(7, 6, 2);
    Image z = random_image(7, 6, 2, 1);
    Image ftrue = random_image(7, 6, 2, 2);
    DataVolume f = volume_from_image(ftrue);
    double w = 0.8;
    CgResult res = solve_cg(A, f, z, w, CgConfig{});
    REQUIRE(res.converged);
    for (size_t i = 0; i < z.size(); ++i) {
        double expected = (ftrue.data[i] + (w / 2.0) * z.data[i]) / (1.0 + w / 2.0);
        CHECK(std::abs(res.v.data[i] - expected) < 1e-8);
    }
}

TEST_CASE("consistent data with matching anchor is a fixed point") {
    RadonOperator A(RadonGeometry::uniform(8, 17), 12);
    Image z = random_image(12, 12, 1, 3);
    DataVolume f = A.apply(z);
    CgResult res = solve_cg(A, f, z, 2.0, CgConfig{});
    REQUIRE(res.converged);
    CHECK(dist2(res.v, z) < 1e-6 * (1.0 + norm2(z)));
}

TEST_CASE("cg matches a dense solve on small problems") {
    CgConfig cfg;
    cfg.tolerance = 1e-12;
    SUBCASE("radon") {
        RadonOperator A(RadonGeometry::uniform(6, 13), 8);
        Image z = random_image(8, 8, 1, 4);
        DataVolume f = A.apply(random_image(8, 8, 1, 5));
        for (double w : {0.1, 1.0, 10.0}) {
            Image oracle = dense_tikhonov_oracle(A, f, z, w);
            CgResult res = solve_cg(A, f, z, w, cfg);
            REQUIRE(res.converged);
            CHECK(dist2(res.v, oracle) < 1e-7 * (1.0 + norm2(oracle)));
        }
    }
    SUBCASE("convolution") {
        ConvolutionOperator A(ConvolutionKernel::gaussian(0.8), 8, 8, 1);
        Image z = random_image(8, 8, 1, 6);
        DataVolume f = A.apply(random_image(8, 8, 1, 7));
        Image oracle = dense_tikhonov_oracle(A, f, z, 0.5);
        CgResult res = solve_cg(A, f, z, 0.5, cfg);
        REQUIRE(res.converged);
        CHECK(dist2(res.v, oracle) < 1e-7 * (1.0 + norm2(oracle)));
    }
}

TEST_CASE("frequency-domain deconvolution agrees with cg") {
    ConvolutionKernel k = ConvolutionKernel::gaussian(1.0);
    ConvolutionOperator A(k, 32, 32, 1);
    Image z = random_image(32, 32, 1, 8);
    DataVolume f = A.apply(random_image(32, 32, 1, 9));
    for (double w : {0.25, 2.0}) {
        Image vf = solve_deconv_frequency(k, f, z, w);
        CgConfig cfg;
        cfg.tolerance = 1e-12;
        cfg.max_iterations = 5000;
        CgResult res = solve_cg(A, f, z, w, cfg);
        REQUIRE(res.converged);
        CHECK(dist2(vf, res.v) < 1e-6 * (1.0 + norm2(res.v)));
    }
}

TEST_CASE("frequency solve hits the normal-equation residual exactly") {
    ConvolutionKernel k = ConvolutionKernel::motion_horizontal(5);
    ConvolutionOperator A(k, 24, 16, 2);
    Image z = random_image(24, 16, 2, 10);
    DataVolume f = A.apply(random_image(24, 16, 2, 11));
    double w = 1.3;
    Image v = solve_deconv_frequency(k, f, z, w);
    // residual of (A*A + (w/2)I)v - (A*f + (w/2)z)
    Image lhs = A.adjoint(A.apply(v));
    axpy(w / 2.0, v, lhs);
    Image rhs = A.adjoint(f);
    axpy(w / 2.0, z, rhs);
    CHECK(dist2(lhs, rhs) < 1e-8 * (1.0 + norm2(rhs)));
}

TEST_CASE("filter values") {
    CHECK(filter_h_alpha(0.0, 3.0) == 0.0);
    CHECK(filter_h_alpha(2.0, 0.0) == doctest::Approx(2.0 / (4.0 * std::numbers::pi)));
    CHECK(filter_h_alpha(-2.0, 0.0) == doctest::Approx(2.0 / (4.0 * std::numbers::pi)));
    // alpha damps high frequencies toward 1/alpha
    CHECK(filter_h_alpha(1e9, 4.0) == doctest::Approx(0.25).epsilon(1e-6));
    // monotone in |r|
    CHECK(filter_h_alpha(1.0, 2.0) < filter_h_alpha(3.0, 2.0));
}

TEST_CASE("filtered radon solve keeps a consistent anchor fixed") {
    int n = 32;
    RadonOperator A(RadonGeometry::uniform(180, 64), n);
    Image z = random_image(n, n, 1, 12);
    // smooth z a bit so the discrete transform is the bottleneck, not aliasing
    ConvolutionOperator blur(ConvolutionKernel::gaussian(1.0), n, n, 1);
    z = image_from_volume(blur.apply(z));
    DataVolume f = A.apply(z);
    Image v = solve_radon_filtered(f, z, 1.0, A);
    // f - Rz = 0, so v must equal z exactly up to fft round-off
    CHECK(dist2(v, z) < 1e-10 * (1.0 + norm2(z)));
}

TEST_CASE("filtered solve reduces the objective from the anchor") {
    int n = 32;
    RadonOperator A(RadonGeometry::uniform(180, 64), n);
    Image truth(n, n, 1);
    double h = 2.0 / n;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            double px = -1.0 + (x + 0.5) * h, py = -1.0 + (y + 0.5) * h;
            if (px * px + py * py < 0.45) truth.at(x, y) = 1.0;
        }
    DataVolume f = A.apply(truth);
    Image z(n, n, 1);  // zero anchor
    double w = 0.05;
    Image v = solve_radon_filtered(f, z, w / 2.0, A);
    CHECK(tikhonov_objective(A, f, z, w, v) < tikhonov_objective(A, f, z, w, z));
    // and it should look like the phantom inside the disk
    double err = dist2(v, truth) / norm2(truth);
    CHECK(err < 0.35);
}
