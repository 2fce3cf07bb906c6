#pragma once

#include <vector>

#include "pottsrec/image.hpp"

namespace pottsrec {

/// Fraction of element pairs on which two partitions agree (together/apart).
double rand_index(const std::vector<int>& p, const std::vector<int>& q);

/// 10 log10(total * ||g||_inf^2 / ||g - u||_2^2); +infinity when u == g.
double psnr(const Image& u, const Image& g);

}  // namespace pottsrec
