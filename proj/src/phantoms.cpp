#include "pottsrec/phantoms.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace pottsrec {

const std::vector<SheppLoganEllipse>& shepp_logan_table(bool modified) {
    static const std::vector<SheppLoganEllipse> kStandard = {
        {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
        {-0.98, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
        {-0.02, 0.1100, 0.3100, 0.22, 0.0, -18.0},
        {-0.02, 0.1600, 0.4100, -0.22, 0.0, 18.0},
        {0.01, 0.2100, 0.2500, 0.0, 0.35, 0.0},
        {0.01, 0.0460, 0.0460, 0.0, 0.1, 0.0},
        {0.01, 0.0460, 0.0460, 0.0, -0.1, 0.0},
        {0.01, 0.0460, 0.0230, -0.08, -0.605, 0.0},
        {0.01, 0.0230, 0.0230, 0.0, -0.606, 0.0},
        {0.01, 0.0230, 0.0460, 0.06, -0.605, 0.0},
    };
    static const std::vector<SheppLoganEllipse> kModified = {
        {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
        {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
        {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
        {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
        {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
        {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
        {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
        {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
        {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
        {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
    };
    return modified ? kModified : kStandard;
}

Phantom shepp_logan(int n, bool modified) {
    if (n < 32) throw std::invalid_argument("shepp_logan: side length must be >= 32");
    const auto& table = shepp_logan_table(modified);
    Image img(n, n, 1);
    const double h = 2.0 / n;
    for (int j = 0; j < n; ++j) {
        double y = -1.0 + (j + 0.5) * h;
        for (int i = 0; i < n; ++i) {
            double x = -1.0 + (i + 0.5) * h;
            double val = 0.0;
            for (const auto& e : table) {
                double phi = e.phi_deg * std::numbers::pi / 180.0;
                double dx = x - e.x0, dy = y - e.y0;
                double rx = dx * std::cos(phi) + dy * std::sin(phi);
                double ry = -dx * std::sin(phi) + dy * std::cos(phi);
                if ((rx / e.a) * (rx / e.a) + (ry / e.b) * (ry / e.b) <= 1.0) val += e.intensity;
            }
            img.at(i, j) = val;
        }
    }
    Phantom p;
    p.ground_truth = extract_labels(img, 0.0);
    p.image = std::move(img);
    return p;
}

namespace {

bool in_triangle(double x, double y, const double vx[3], const double vy[3]) {
    bool pos = false, neg = false;
    for (int k = 0; k < 3; ++k) {
        int k2 = (k + 1) % 3;
        double cr = (vx[k2] - vx[k]) * (y - vy[k]) - (vy[k2] - vy[k]) * (x - vx[k]);
        if (cr > 0) pos = true;
        if (cr < 0) neg = true;
    }
    return !(pos && neg);
}

}  // namespace

Phantom geometric_shapes(int n) {
    if (n < 32) throw std::invalid_argument("geometric_shapes: side length must be >= 32");
    Image img(n, n, 1);
    const double h = 2.0 / n;

    // equilateral triangle rotated by 20 degrees
    const double rot = 20.0 * std::numbers::pi / 180.0;
    const double tcx = -0.15, tcy = -0.45, tr = 0.35;  // circumradius
    double vx[3], vy[3];
    for (int k = 0; k < 3; ++k) {
        double a = rot + 2.0 * std::numbers::pi * k / 3.0 + std::numbers::pi / 2.0;
        vx[k] = tcx + tr * std::cos(a);
        vy[k] = tcy + tr * std::sin(a);
    }

    for (int j = 0; j < n; ++j) {
        double y = -1.0 + (j + 0.5) * h;
        for (int i = 0; i < n; ++i) {
            double x = -1.0 + (i + 0.5) * h;
            double val = 0.0;
            double ddx = x + 0.4, ddy = y - 0.4;
            if (ddx * ddx + ddy * ddy <= 0.3 * 0.3) val = 1.0;
            else if (x >= 0.1 && x <= 0.7 && y >= 0.25 && y <= 0.65) val = 0.6;
            else if (in_triangle(x, y, vx, vy)) val = 0.3;
            img.at(i, j) = val;
        }
    }
    Phantom p;
    p.ground_truth = extract_labels(img, 0.0);
    p.image = std::move(img);
    return p;
}

DataVolume add_noise(const DataVolume& f, double level, uint64_t seed) {
    if (level < 0.0) throw std::invalid_argument("add_noise: level must be nonnegative");
    if (level == 0.0) return f;
    double peak = 0.0;
    for (double v : f.data) peak = std::max(peak, std::abs(v));
    double sigma = level * peak;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, sigma);
    DataVolume out = f;
    for (double& v : out.data) v += dist(rng);
    return out;
}

}  // namespace pottsrec
