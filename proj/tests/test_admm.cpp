#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "pottsrec/admm.hpp"
#include "pottsrec/metrics.hpp"
#include "pottsrec/phantoms.hpp"

using namespace pottsrec;

namespace {

// every pixel exactly once, chains follow p, consecutive entries differ by p
void check_chain_cover(int w, int h, int px, int py) {
    auto chains = chains_for_displacement(w, h, px, py);
    std::vector<int> seen(static_cast<size_t>(w) * h, 0);
    for (auto& c : chains) {
        REQUIRE(!c.empty());
        for (size_t i = 0; i < c.size(); ++i) {
            REQUIRE(c[i] >= 0);
            REQUIRE(c[i] < w * h);
            ++seen[c[i]];
            if (i > 0) {
                int x0 = c[i - 1] % w, y0 = c[i - 1] / w;
                int x1 = c[i] % w, y1 = c[i] / w;
                CHECK(x1 - x0 == px);
                CHECK(y1 - y0 == py);
            }
        }
    }
    for (int s : seen) CHECK(s == 1);
}

// Identity-operator denoising instance with a mean-squared data term:
// operator and data are scaled by 1/sqrt(#pixels), gamma by its square.
struct DenoiseInstance {
    IdentityOperator raw;
    ScaledOperator A;
    DataVolume f;
    double c;

    DenoiseInstance(const Image& truth, double noise_level, unsigned seed)
        : raw(truth.width, truth.height, truth.channels),
          A(raw, 1.0 / std::sqrt(static_cast<double>(truth.data.size()))),
          c(1.0 / std::sqrt(static_cast<double>(truth.data.size()))) {
        f = add_noise(volume_from_image(truth), noise_level, seed);
        for (double& v : f.data) v *= c;
    }

    PottsConfig config(double gamma_base, int level) const {
        PottsConfig cfg;
        cfg.gamma = gamma_base * c * c;
        cfg.neighborhood = build_system(level);
        cfg.merge_tolerance = 0.02;
        return cfg;
    }
};

}  // namespace

TEST_CASE("chains partition the grid") {
    SUBCASE("rows of a 4x4 grid") {
        auto chains = chains_for_displacement(4, 4, 1, 0);
        REQUIRE(chains.size() == 4);
        for (auto& c : chains) CHECK(c.size() == 4);
    }
    SUBCASE("diagonals of a 3x3 grid have lengths 1,2,3,2,1") {
        auto chains = chains_for_displacement(3, 3, 1, 1);
        std::vector<size_t> lens;
        for (auto& c : chains) lens.push_back(c.size());
        std::sort(lens.begin(), lens.end());
        CHECK(lens == std::vector<size_t>{1, 1, 2, 2, 3});
    }
    SUBCASE("coverage for every system displacement") {
        for (int lvl = 0; lvl <= 2; ++lvl)
            for (auto& p : build_system(lvl).displacements) check_chain_cover(5, 7, p[0], p[1]);
        check_chain_cover(1, 6, 1, 0);
        check_chain_cover(6, 1, 2, 1);
    }
}

TEST_CASE("label extraction") {
    SUBCASE("two half planes") {
        Image v(4, 4, 1);
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x) v.at(x, y) = (x < 2) ? 0.0 : 1.0;
        LabelMap lm = extract_labels(v, 1e-9);
        CHECK(lm.label_count == 2);
        CHECK(lm.labels[0] != lm.labels[3]);
        CHECK(lm.labels[0] == lm.labels[4]);
    }
    SUBCASE("equal values in disconnected components get distinct labels") {
        Image v(5, 1, 1);
        v.at(0, 0) = 1.0;
        v.at(2, 0) = 0.0;
        v.at(1, 0) = 1.0;
        v.at(3, 0) = 1.0;
        v.at(4, 0) = 1.0;
        LabelMap lm = extract_labels(v, 1e-9);
        CHECK(lm.label_count == 3);
        CHECK(lm.labels[0] == lm.labels[1]);
        CHECK(lm.labels[3] == lm.labels[4]);
        CHECK(lm.labels[0] != lm.labels[3]);
    }
    SUBCASE("tolerance merges near-equal values, channels compared jointly") {
        Image v(2, 1, 2);
        v.at(0, 0, 0) = 1.0;
        v.at(1, 0, 0) = 1.0 + 1e-8;
        v.at(0, 0, 1) = 2.0;
        v.at(1, 0, 1) = 2.0;
        CHECK(extract_labels(v, 1e-6).label_count == 1);
        CHECK(extract_labels(v, 1e-12).label_count == 2);
        v.at(1, 0, 1) = 3.0;  // second channel now differs
        CHECK(extract_labels(v, 1e-6).label_count == 2);
    }
}

TEST_CASE("identity-operator reconstruction recovers a piecewise constant image") {
    int n = 32;
    Phantom ph = geometric_shapes(n);
    Image& truth = ph.image;
    DenoiseInstance inst(truth, 0.05, 99);
    AdmmResult res = run(inst.A, inst.f, inst.config(0.02, 1), CouplingSchedule{});
    REQUIRE(!res.diagnostics.aborted);
    CHECK(res.diagnostics.converged);

    double ri = rand_index(ph.ground_truth.labels, res.labels.labels);
    CHECK(ri > 0.95);
    CHECK(dist2(res.v, truth) / norm2(truth) < 0.2);
}

TEST_CASE("nu coupling variant also converges on the denoising problem") {
    int n = 32;
    Phantom ph = geometric_shapes(n);
    DenoiseInstance inst(ph.image, 0.05, 7);
    CouplingSchedule sched;
    sched.nu_mode = CouplingSchedule::NuMode::mu_over_s;
    AdmmResult res = run(inst.A, inst.f, inst.config(0.02, 0), sched);
    REQUIRE(!res.diagnostics.aborted);
    CHECK(res.diagnostics.converged);
    double ri = rand_index(ph.ground_truth.labels, res.labels.labels);
    CHECK(ri > 0.9);
}

TEST_CASE("runs are deterministic") {
    int n = 32;
    Phantom ph = geometric_shapes(n);
    DenoiseInstance inst(ph.image, 0.1, 3);
    PottsConfig cfg = inst.config(0.05, 1);
    AdmmResult a = run(inst.A, inst.f, cfg, CouplingSchedule{});
    AdmmResult b = run(inst.A, inst.f, cfg, CouplingSchedule{});
    REQUIRE(a.v.size() == b.v.size());
    for (size_t i = 0; i < a.v.size(); ++i) CHECK(a.v.data[i] == b.v.data[i]);
    CHECK(a.labels.labels == b.labels.labels);
    CHECK(a.diagnostics.iterations == b.diagnostics.iterations);
}

TEST_CASE("zero data with zero gamma collapses to the data term minimizer") {
    int n = 8;
    IdentityOperator A(n, n, 1);
    DataVolume f(GeometryTag::image, n, n, 1);  // all zeros
    PottsConfig cfg;
    cfg.gamma = 1.0;
    cfg.neighborhood = build_system(0);
    AdmmResult res = run(A, f, cfg, CouplingSchedule{});
    REQUIRE(!res.diagnostics.aborted);
    CHECK(norm2(res.v) < 1e-8);
    CHECK(res.labels.label_count == 1);
}

TEST_CASE("diagnostics are recorded every iteration") {
    int n = 32;
    DenoiseInstance inst(geometric_shapes(n).image, 0.05, 1);
    AdmmResult res = run(inst.A, inst.f, inst.config(0.03, 0), CouplingSchedule{});
    REQUIRE(res.diagnostics.iterations > 1);
    REQUIRE(res.diagnostics.history.size() == static_cast<size_t>(res.diagnostics.iterations));
    for (size_t i = 0; i < res.diagnostics.history.size(); ++i) {
        const auto& rec = res.diagnostics.history[i];
        CHECK(rec.k == static_cast<int>(i) + 1);
        CHECK(rec.mu == doctest::Approx(1e-7 * std::pow(rec.k, 2.01)));
        CHECK(rec.nu == 0.0);
        CHECK(rec.split_residuals.size() == 2);
        CHECK(rec.stop_value >= 0.0);
        CHECK(std::isfinite(rec.objective));
    }
    // the stop rule fired on the last record
    CHECK(res.diagnostics.history.back().stop_value < PottsConfig{}.stop_tolerance);
}

TEST_CASE("larger gamma yields at most as many segments on the same data") {
    int n = 32;
    DenoiseInstance inst(geometric_shapes(n).image, 0.08, 17);
    std::vector<int> counts;
    for (double g : {0.005, 0.05, 2.0}) {
        PottsConfig cfg = inst.config(g, 1);
        AdmmResult res = run(inst.A, inst.f, cfg, CouplingSchedule{});
        REQUIRE(!res.diagnostics.aborted);
        counts.push_back(res.labels.label_count);
    }
    CHECK(counts[0] >= counts[1]);
    CHECK(counts[1] >= counts[2]);
    CHECK(counts[2] == 1);  // huge gamma flattens everything
}

TEST_CASE("potts objective counts weighted jumps plus data fit") {
    int n = 4;
    Image v(n, n, 1);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) v.at(x, y) = (x < 2) ? 0.0 : 5.0;
    IdentityOperator A(n, n, 1);
    DataVolume f = volume_from_image(v);
    auto nb = build_system(0);
    // vertical boundary: 4 horizontal jumps (w=1), no vertical jumps
    CHECK(potts_objective(A, f, v, 0.5, nb, 1e-9) == doctest::Approx(0.5 * 4.0));
    // data term adds ||v - f||^2
    DataVolume f0(GeometryTag::image, n, n, 1);
    CHECK(potts_objective(A, f0, v, 0.5, nb, 1e-9) == doctest::Approx(0.5 * 4.0 + 8.0 * 25.0));
}
