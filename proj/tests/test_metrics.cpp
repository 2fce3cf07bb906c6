#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "pottsrec/metrics.hpp"

using namespace pottsrec;

TEST_CASE("rand index hand examples") {
    CHECK(rand_index({0, 0, 1, 1}, {1, 1, 0, 0}) == doctest::Approx(1.0));
    CHECK(rand_index({0, 0, 0}, {0, 1, 2}) == doctest::Approx(0.0));
    // {a,b | c,d} vs {a,b,c | d}: pairs ab, cd, ac, ad, bc, bd
    // agree on ab (together), ad, bd (apart); disagree on cd, ac, bc -> 3/6
    CHECK(rand_index({0, 0, 1, 1}, {0, 0, 0, 1}) == doctest::Approx(0.5));
    // five of six pairs agree
    CHECK(rand_index({0, 0, 1}, {0, 0, 1, /*padding*/}) == doctest::Approx(1.0));
    CHECK(rand_index({0, 1, 2, 2}, {0, 1, 2, 3}) == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("rand index properties") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + static_cast<int>(rng() % 49);
        std::uniform_int_distribution<int> lab(0, 4);
        std::vector<int> p(n), q(n);
        for (int i = 0; i < n; ++i) {
            p[i] = lab(rng);
            q[i] = lab(rng);
        }
        double rpq = rand_index(p, q);
        CHECK(rpq == doctest::Approx(oracles::brute_force_rand_index(p, q)).epsilon(1e-12));
        CHECK(rpq == doctest::Approx(rand_index(q, p)).epsilon(1e-12));
        CHECK(rpq >= 0.0);
        CHECK(rpq <= 1.0);
        CHECK(rand_index(p, p) == doctest::Approx(1.0));
        // invariance under label permutation
        std::vector<int> perm{3, 1, 4, 0, 2};
        std::vector<int> pp(n);
        for (int i = 0; i < n; ++i) pp[i] = perm[p[i]];
        CHECK(rand_index(pp, q) == doctest::Approx(rpq).epsilon(1e-12));
    }
}

TEST_CASE("rand index rejects mismatched sizes") {
    CHECK_THROWS(rand_index({0, 1}, {0, 1, 2}));
    CHECK_THROWS(rand_index({}, {}));
    CHECK_THROWS(rand_index({7}, {3}));  // no pairs to compare
}

TEST_CASE("psnr hand values") {
    Image g(2, 2, 1);
    for (double& v : g.data) v = 1.0;
    Image u = g;
    CHECK(std::isinf(psnr(u, g)));
    CHECK(psnr(u, g) > 0.0);

    // uniform error of 0.5 against peak 1: 10 log10(1 / 0.25) = 6.0206
    for (double& v : u.data) v = 0.5;
    CHECK(psnr(u, g) == doctest::Approx(10.0 * std::log10(4.0)).epsilon(1e-12));
}

TEST_CASE("psnr is invariant under joint scaling") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    Image g(6, 5, 1), u(6, 5, 1);
    for (size_t i = 0; i < g.size(); ++i) {
        g.data[i] = val(rng);
        u.data[i] = val(rng);
    }
    double base = psnr(u, g);
    Image g2 = g, u2 = u;
    scale(g2, 7.0);
    scale(u2, 7.0);
    CHECK(psnr(u2, g2) == doctest::Approx(base).epsilon(1e-12));
    // lower error -> higher psnr
    Image closer = g;
    closer.data[0] += 0.01;
    CHECK(psnr(closer, g) > base);
}
