#pragma once

#include <cstdint>

#include "pottsrec/admm.hpp"
#include "pottsrec/image.hpp"
#include "pottsrec/operators.hpp"

namespace pottsrec {

struct Phantom {
    Image image;
    LabelMap ground_truth;
};

struct SheppLoganEllipse {
    double intensity, a, b, x0, y0, phi_deg;
};

/// The ten-ellipse table; modified = high-contrast intensity variant.
const std::vector<SheppLoganEllipse>& shepp_logan_table(bool modified);

/// Render at pixel centers on [-1,1]^2 (no anti-aliasing, exactly piecewise
/// constant); ground truth = connected constant regions.
Phantom shepp_logan(int n, bool modified = true);

/// Disk, rectangle, and a rotated triangle at fixed constants on zero background.
Phantom geometric_shapes(int n);

/// Adds i.i.d. Gaussian noise with sigma = level * max|f|; level 0 is the identity.
DataVolume add_noise(const DataVolume& f, double level, uint64_t seed);

}  // namespace pottsrec
