#pragma once

#include <vector>

namespace pottsrec {

/// Sequence of n samples, each a C-dimensional real vector (channel-interleaved).
struct Signal1D {
    int length = 0;
    int channels = 1;
    std::vector<double> samples;  // length * channels

    Signal1D() = default;
    Signal1D(int n, int c) : length(n), channels(c), samples(static_cast<size_t>(n) * c, 0.0) {}

    double& at(int i, int c = 0) { return samples[static_cast<size_t>(i) * channels + c]; }
    double at(int i, int c = 0) const { return samples[static_cast<size_t>(i) * channels + c]; }
};

/// Piecewise-constant minimizer: jump at position j (1-based) separates
/// samples j-1 and j (0-based), so positions lie in [1, n-1].
struct PottsSolution1D {
    std::vector<int> jump_positions;
    std::vector<std::vector<double>> segment_values;  // one C-vector per segment
    double energy = 0.0;
};

/// Prefix sums of samples and squared sample norms; interval means and
/// squared deviations in O(C) per query.
class MomentTable {
public:
    explicit MomentTable(const Signal1D& data);

    /// componentwise mean of samples l..r (0-based, inclusive)
    void mean(int l, int r, double* out) const;
    /// squared l2 deviation of samples l..r from their mean
    double deviation(int l, int r) const;

private:
    int channels_;
    std::vector<double> cum_;    // (n+1) * C prefix sums
    std::vector<double> cumsq_;  // n+1 prefix sums of squared norms
};

/// Exact minimizer of gamma*||grad g||_0 + ||g - f||_2^2 by dynamic
/// programming, O(n^2 C) time, O(n C) space.
PottsSolution1D solve_potts_1d(const Signal1D& data, double gamma, bool pruning = true);

/// Potts functional value of a given solution against the data.
double potts_energy_1d(const PottsSolution1D& sol, const Signal1D& data, double gamma);

/// Expand a solution to a dense signal of the data's length.
Signal1D reconstruct_signal(const PottsSolution1D& sol, int length, int channels);

}  // namespace pottsrec
