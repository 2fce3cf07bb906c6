#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pottsrec/image.hpp"
#include "pottsrec/neighborhood.hpp"
#include "pottsrec/operators.hpp"
#include "pottsrec/tikhonov.hpp"

namespace pottsrec {

/// Increasing coupling mu_k = mu0 * k^tau; iterations are counted from k = 1.
struct CouplingSchedule {
    double mu0 = 1e-7;
    double tau = 2.01;
    enum class NuMode { zero, mu_over_s } nu_mode = NuMode::zero;

    double mu(int k) const { return mu0 * std::pow(static_cast<double>(k), tau); }
    double nu(int k, int S) const {
        return nu_mode == NuMode::mu_over_s ? mu(k) / S : 0.0;
    }
};

struct PottsConfig {
    double gamma = 0.1;
    NeighborhoodSystem neighborhood;
    double stop_tolerance = 1e-3;
    int max_iterations = 250;
    CgConfig cg;
    // Label-extraction merge tolerance; when unset, 1e-6 times the value
    // range of the returned image. The iteration only equalizes the split
    // variables up to stop_tolerance, so segment values agree to roughly
    // that level and a tolerance of about 10x stop_tolerance times the
    // value range merges them reliably.
    std::optional<double> merge_tolerance;
};

struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<int> labels;
    int label_count = 0;
};

struct IterationRecord {
    int k = 0;
    double mu = 0.0;
    double nu = 0.0;
    std::vector<double> split_residuals;  // ||u_s - v|| per direction
    double stop_value = 0.0;              // ||u1 - u2|| / (||u1|| + ||u2||)
    double multiplier_norm = 0.0;         // max_s ||lambda_s / mu||
    double data_residual = 0.0;           // ||A v - f||
    double objective = 0.0;               // gamma * sum_s w_s * jumps_s + ||A v - f||^2
};

struct AdmmDiagnostics {
    std::vector<IterationRecord> history;
    bool converged = false;
    bool aborted = false;
    std::string abort_reason;
    int iterations = 0;
};

struct AdmmResult {
    Image v;
    LabelMap labels;
    AdmmDiagnostics diagnostics;
};

/// prox(z, w, warm) = argmin_v d(v, f) + (w/2)||v - z||^2
using ProxFn = std::function<Image(const Image& z, double w, const Image* warm_start)>;

struct AdmmState {
    std::vector<Image> u;        // one split variable per displacement
    Image v;
    std::vector<Image> lambda;   // multipliers for v - u_s
    std::vector<Image> rho;      // multipliers for u_r - u_t, flat upper triangle
    int k = 1;
    std::vector<long> jump_counts;  // per direction, from the last sweep

    static AdmmState zeros(int width, int height, int channels, int S);
    Image& rho_at(int r, int t);  // r < t
};

/// Maximal pixel chains along displacement p; every pixel appears exactly once.
std::vector<std::vector<int>> chains_for_displacement(int width, int height, int px, int py);

/// One sweep of the splitting iteration: S chainwise Potts solves, the
/// Tikhonov v-step, and multiplier ascent. Returns false (with a reason) when
/// the per-iteration certificate fails in the nu = 0 case.
bool admm_step(AdmmState& state, const ProxFn& prox, const PottsConfig& config,
               const CouplingSchedule& schedule, std::string* certificate_failure = nullptr);

AdmmResult run(const ForwardOperator& A, const DataVolume& f, const PottsConfig& config,
               const CouplingSchedule& schedule, ProxFn prox = nullptr);

LabelMap extract_labels(const Image& v, double merge_tolerance);

/// Default merge tolerance, 1e-6 times the value range of v.
double default_merge_tolerance(const Image& v);

/// Weighted Potts objective of v against data f with jump counting at the
/// given per-channel tolerance.
double potts_objective(const ForwardOperator& A, const DataVolume& f, const Image& v, double gamma,
                       const NeighborhoodSystem& nbhd, double jump_tolerance);

ProxFn make_l2_prox(const ForwardOperator& A, const DataVolume& f, const CgConfig& cg);
ProxFn make_deconv_prox(const ConvolutionKernel& kernel, const DataVolume& f);
ProxFn make_radon_filtered_prox(const RadonOperator& op, const DataVolume& f);

}  // namespace pottsrec
