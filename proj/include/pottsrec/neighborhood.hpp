#pragma once

#include <array>
#include <vector>

namespace pottsrec {

/// Finite-difference displacement vectors with weights approximating
/// Euclidean boundary length.
struct NeighborhoodSystem {
    std::vector<std::array<int, 2>> displacements;
    std::vector<double> weights;

    int size() const { return static_cast<int>(displacements.size()); }
};

/// Levels: 0 = axes, 1 = axes + diagonals, 2 = axes + diagonals + knight moves.
NeighborhoodSystem build_system(int level);

/// Solve for weights by counting jump crossings of half-plane test images,
/// one edge orientation per displacement in the system.
std::vector<double> derive_weights(const std::vector<std::array<int, 2>>& displacements);

/// ||p||_N = sum_s w_s |<p, p_s>|
double induced_norm(const NeighborhoodSystem& system, double px, double py);

/// Ratio of longest to shortest unit vector under ||.||_N, sampled on a
/// uniform angular grid.
double isotropy_ratio(const NeighborhoodSystem& system, int angular_samples);

}  // namespace pottsrec
