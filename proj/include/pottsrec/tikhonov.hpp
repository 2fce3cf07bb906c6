#pragma once

#include "pottsrec/image.hpp"
#include "pottsrec/operators.hpp"

namespace pottsrec {

struct CgConfig {
    int max_iterations = 500;
    double tolerance = 1e-6;  // relative residual of the normal equation
};

struct CgResult {
    Image v;
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// min_v ||Av - f||^2 + (w/2)||v - z||^2 via conjugate gradients on the
/// normal equation (A*A + (w/2)I)v = A*f + (w/2)z. Starts from warm_start
/// when given, otherwise from z.
CgResult solve_cg(const ForwardOperator& A, const DataVolume& f, const Image& z, double w,
                  const CgConfig& config, const Image* warm_start = nullptr);

/// Exact per-frequency minimizer for a periodic convolution operator.
Image solve_deconv_frequency(const ConvolutionKernel& kernel, const DataVolume& f, const Image& z,
                             double w);

/// Dense-angle Radon Tikhonov solve v = z + R* H_alpha (f - R z) with the
/// detector-axis filter h_alpha(r) = |r| / (4 pi + alpha |r|).
Image solve_radon_filtered(const DataVolume& f, const Image& z, double alpha,
                           const RadonOperator& op);

double filter_h_alpha(double r, double alpha);

/// Ram-Lak filtered backprojection baseline (the alpha -> 0 filter limit).
Image fbp_ram_lak(const DataVolume& f, const RadonOperator& op);

/// Value of the Tikhonov objective ||Av - f||^2 + (w/2)||v - z||^2.
double tikhonov_objective(const ForwardOperator& A, const DataVolume& f, const Image& z, double w,
                          const Image& v);

}  // namespace pottsrec
