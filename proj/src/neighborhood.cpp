#include "pottsrec/neighborhood.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

namespace pottsrec {

namespace {

constexpr int kGridSize = 512;
constexpr int kMargin = 16;

// Jump crossings of a half-plane image whose boundary runs along direction
// (ex, ey), |ey| <= |ex|, counted for base columns inside the margin.
// The line passes through an irrational offset so no lattice point lies on it.
long count_crossings(int ex, int ey, int px, int py) {
    const int n = kGridSize;
    const double cx = n / 2.0 + std::sqrt(2.0) / 4.0;
    const double cy = n / 2.0 + std::sqrt(3.0) / 4.0;
    // normal of the edge line
    const double nx = -static_cast<double>(ey);
    const double ny = static_cast<double>(ex);

    std::vector<char> u(static_cast<size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            u[static_cast<size_t>(j) * n + i] = ((i - cx) * nx + (j - cy) * ny > 0.0) ? 1 : 0;

    long count = 0;
    for (int i = kMargin; i < n - kMargin; ++i) {
        for (int j = 0; j < n; ++j) {
            int i2 = i + px, j2 = j + py;
            if (i2 < 0 || i2 >= n || j2 < 0 || j2 >= n) continue;
            if (u[static_cast<size_t>(j) * n + i] != u[static_cast<size_t>(j2) * n + i2]) ++count;
        }
    }
    return count;
}

// Small dense solver, partial pivoting.
std::vector<double> solve_linear(std::vector<std::vector<double>> m, std::vector<double> rhs) {
    const int s = static_cast<int>(rhs.size());
    for (int col = 0; col < s; ++col) {
        int piv = col;
        for (int r = col + 1; r < s; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) < 1e-12)
            throw std::runtime_error("derive_weights: unsupported neighborhood (singular system)");
        std::swap(m[col], m[piv]);
        std::swap(rhs[col], rhs[piv]);
        for (int r = 0; r < s; ++r) {
            if (r == col) continue;
            double f = m[r][col] / m[col][col];
            for (int c2 = col; c2 < s; ++c2) m[r][c2] -= f * m[col][c2];
            rhs[r] -= f * rhs[col];
        }
    }
    for (int i = 0; i < s; ++i) rhs[i] /= m[i][i];
    return rhs;
}

}  // namespace

NeighborhoodSystem build_system(int level) {
    const double s2 = std::sqrt(2.0);
    const double s5 = std::sqrt(5.0);
    NeighborhoodSystem sys;
    switch (level) {
        case 0:
            sys.displacements = {{1, 0}, {0, 1}};
            sys.weights = {1.0, 1.0};
            break;
        case 1:
            sys.displacements = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
            sys.weights = {s2 - 1.0, s2 - 1.0, 1.0 - s2 / 2.0, 1.0 - s2 / 2.0};
            break;
        case 2:
            sys.displacements = {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 1}, {2, -1}, {1, 2}, {1, -2}};
            sys.weights = {s5 - 2.0, s5 - 2.0, s5 - 1.5 * s2, s5 - 1.5 * s2,
                           0.5 * (1.0 + s2 - s5), 0.5 * (1.0 + s2 - s5),
                           0.5 * (1.0 + s2 - s5), 0.5 * (1.0 + s2 - s5)};
            break;
        default:
            throw std::invalid_argument("build_system: unknown level");
    }
    return sys;
}

std::vector<double> derive_weights(const std::vector<std::array<int, 2>>& displacements) {
    const int s = static_cast<int>(displacements.size());
    if (s < 2) throw std::invalid_argument("derive_weights: need at least two displacements");
    // slopes must be pairwise distinct
    for (int a = 0; a < s; ++a)
        for (int b = a + 1; b < s; ++b)
            if (displacements[a][0] * displacements[b][1] == displacements[a][1] * displacements[b][0])
                throw std::invalid_argument("derive_weights: duplicate slope in neighborhood");

    const double width = kGridSize - 2 * kMargin;
    std::vector<std::vector<double>> mat(s, std::vector<double>(s, 0.0));
    std::vector<double> rhs(s, 0.0);
    for (int t = 0; t < s; ++t) {
        int ex = displacements[t][0], ey = displacements[t][1];
        const bool rotate = std::abs(ey) > std::abs(ex);  // steep edges: look at the pi/2-rotated image
        for (int j = 0; j < s; ++j) {
            int px = displacements[j][0], py = displacements[j][1];
            mat[t][j] = rotate ? static_cast<double>(count_crossings(ey, ex, py, px))
                               : static_cast<double>(count_crossings(ex, ey, px, py));
        }
        double run = std::max(std::abs(ex), std::abs(ey));
        rhs[t] = width * std::hypot(ex, ey) / run;
    }
    return solve_linear(std::move(mat), std::move(rhs));
}

double induced_norm(const NeighborhoodSystem& system, double px, double py) {
    double s = 0.0;
    for (int i = 0; i < system.size(); ++i)
        s += system.weights[i] * std::abs(px * system.displacements[i][0] + py * system.displacements[i][1]);
    return s;
}

double isotropy_ratio(const NeighborhoodSystem& system, int angular_samples) {
    if (angular_samples < 360) throw std::invalid_argument("isotropy_ratio: need >= 360 samples");
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int i = 0; i < angular_samples; ++i) {
        double a = 2.0 * std::numbers::pi * i / angular_samples;
        double v = induced_norm(system, std::cos(a), std::sin(a));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi / lo;
}

}  // namespace pottsrec
