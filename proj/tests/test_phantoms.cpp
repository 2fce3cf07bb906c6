#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "pottsrec/metrics.hpp"
#include "pottsrec/phantoms.hpp"

using namespace pottsrec;

namespace {

// independent point-in-ellipse evaluation straight from the table
double table_value(const std::vector<SheppLoganEllipse>& table, double x, double y) {
    double acc = 0.0;
    for (const auto& e : table) {
        double phi = e.phi_deg * std::numbers::pi / 180.0;
        double c = std::cos(phi), s = std::sin(phi);
        double dx = x - e.x0, dy = y - e.y0;
        double xr = c * dx + s * dy, yr = -s * dx + c * dy;
        if (xr * xr / (e.a * e.a) + yr * yr / (e.b * e.b) <= 1.0) acc += e.intensity;
    }
    return acc;
}

}  // namespace

TEST_CASE("shepp-logan table structure") {
    for (bool modified : {false, true}) {
        const auto& t = shepp_logan_table(modified);
        REQUIRE(t.size() == 10);
        CHECK(t[0].intensity == 1.0);
        CHECK(t[0].a == doctest::Approx(0.69));
        CHECK(t[0].b == doctest::Approx(0.92));
        CHECK(t[1].intensity == doctest::Approx(modified ? -0.8 : -0.98));
    }
}

TEST_CASE("rendered phantom matches a direct table evaluation") {
    int n = 64;
    Phantom ph = shepp_logan(n);
    const auto& table = shepp_logan_table(true);
    double h = 2.0 / n;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            double px = -1.0 + (x + 0.5) * h, py = -1.0 + (y + 0.5) * h;
            CHECK(ph.image.at(x, y) == doctest::Approx(table_value(table, px, py)).epsilon(1e-14));
        }
}

TEST_CASE("phantom values live in [0,1] and vanish outside the head") {
    for (int n : {64, 128}) {
        Phantom ph = shepp_logan(n);
        for (double v : ph.image.data) {
            CHECK(v >= -1e-12);  // cancellation in overlapping ellipse sums
            CHECK(v <= 1.0 + 1e-12);
        }
        // corner pixels are outside the outer ellipse
        CHECK(ph.image.at(0, 0) == 0.0);
        CHECK(ph.image.at(n - 1, n - 1) == 0.0);
        // small, piecewise-constant set of distinct values
        std::set<double> distinct(ph.image.data.begin(), ph.image.data.end());
        CHECK(distinct.size() >= 5);
        CHECK(distinct.size() <= 12);
    }
}

TEST_CASE("ground truth labels are consistent with the image") {
    Phantom ph = shepp_logan(96);
    REQUIRE(ph.ground_truth.labels.size() == ph.image.pixels());
    CHECK(ph.ground_truth.label_count > 5);
    // identical labels always carry identical values
    for (size_t i = 1; i < ph.image.pixels(); ++i)
        if (ph.ground_truth.labels[i] == ph.ground_truth.labels[i - 1])
            CHECK(ph.image.data[i] == ph.image.data[i - 1]);
}

TEST_CASE("geometric shapes have the advertised areas") {
    int n = 256;
    Phantom ph = geometric_shapes(n);
    double h = 2.0 / n;
    double a_disk = 0.0, a_rect = 0.0, a_tri = 0.0;
    for (double v : ph.image.data) {
        if (v == 1.0) a_disk += h * h;
        if (v == 0.6) a_rect += h * h;
        if (v == 0.3) a_tri += h * h;
    }
    CHECK(a_disk == doctest::Approx(std::numbers::pi * 0.3 * 0.3).epsilon(0.02));
    CHECK(a_rect == doctest::Approx(0.6 * 0.4).epsilon(0.02));
    // equilateral triangle with circumradius R: area = 3 sqrt(3)/4 R^2
    CHECK(a_tri == doctest::Approx(3.0 * std::sqrt(3.0) / 4.0 * 0.35 * 0.35).epsilon(0.02));
    CHECK(ph.ground_truth.label_count == 4);
    CHECK_THROWS(geometric_shapes(16));
}

TEST_CASE("resolutions are nested renderings of the same scene") {
    Phantom lo = geometric_shapes(32), hi = geometric_shapes(64);
    // every 2x2 block of the fine grid contains the coarse pixel center value
    int hits = 0, total = 0;
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) {
            ++total;
            double v = lo.image.at(x, y);
            for (int dy = 0; dy < 2; ++dy)
                for (int dx = 0; dx < 2; ++dx)
                    if (hi.image.at(2 * x + dx, 2 * y + dy) == v) {
                        ++hits;
                        dy = dx = 2;
                    }
        }
    CHECK(hits > total * 95 / 100);
}

TEST_CASE("noise model") {
    DataVolume f(GeometryTag::image, 64, 64, 1);
    for (double& v : f.data) v = 0.5;
    f.data[0] = 2.0;  // peak for the sigma scaling

    DataVolume clean = add_noise(f, 0.0, 9);
    CHECK(clean.data == f.data);

    DataVolume noisy = add_noise(f, 0.1, 9);
    DataVolume again = add_noise(f, 0.1, 9);
    CHECK(noisy.data == again.data);  // seeded, deterministic
    DataVolume other = add_noise(f, 0.1, 10);
    CHECK(noisy.data != other.data);

    // sample std close to level * max|f| = 0.2
    double mean = 0.0;
    for (size_t i = 0; i < noisy.size(); ++i) mean += noisy.data[i] - f.data[i];
    mean /= static_cast<double>(noisy.size());
    double var = 0.0;
    for (size_t i = 0; i < noisy.size(); ++i) {
        double d = noisy.data[i] - f.data[i] - mean;
        var += d * d;
    }
    var /= static_cast<double>(noisy.size() - 1);
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::sqrt(var) == doctest::Approx(0.2).epsilon(0.06));
}
