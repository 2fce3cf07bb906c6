#pragma once

// Test-only oracles, independent of the library's solver paths.

#include <cmath>
#include <limits>
#include <vector>

#include "pottsrec/potts1d.hpp"

namespace oracles {

// Exhaustive minimum of the univariate Potts functional over all 2^(n-1)
// jump configurations. Segment values are means computed directly.
inline double brute_force_potts_1d(const pottsrec::Signal1D& f, double gamma) {
    const int n = f.length;
    const int c = f.channels;
    double best = std::numeric_limits<double>::infinity();
    for (unsigned long mask = 0; mask < (1ul << (n - 1)); ++mask) {
        double energy = gamma * static_cast<double>(__builtin_popcountl(mask));
        int start = 0;
        for (int end = 1; end <= n; ++end) {
            bool boundary = (end == n) || (mask & (1ul << (end - 1)));
            if (!boundary) continue;
            for (int ch = 0; ch < c; ++ch) {
                double mean = 0.0;
                for (int i = start; i < end; ++i) mean += f.at(i, ch);
                mean /= (end - start);
                for (int i = start; i < end; ++i) {
                    double d = f.at(i, ch) - mean;
                    energy += d * d;
                }
            }
            start = end;
        }
        if (energy < best) best = energy;
    }
    return best;
}

// O(N^2) pairwise Rand index.
inline double brute_force_rand_index(const std::vector<int>& p, const std::vector<int>& q) {
    const size_t n = p.size();
    double agree = 0.0, total = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            bool same_p = p[i] == p[j];
            bool same_q = q[i] == q[j];
            if (same_p == same_q) agree += 1.0;
            total += 1.0;
        }
    return agree / total;
}

}  // namespace oracles
