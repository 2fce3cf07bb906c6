#include "pottsrec/potts1d.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pottsrec {

MomentTable::MomentTable(const Signal1D& data) : channels_(data.channels) {
    const int n = data.length;
    const int c = data.channels;
    cum_.assign(static_cast<size_t>(n + 1) * c, 0.0);
    cumsq_.assign(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        double sq = 0.0;
        for (int ch = 0; ch < c; ++ch) {
            double v = data.at(i, ch);
            cum_[static_cast<size_t>(i + 1) * c + ch] = cum_[static_cast<size_t>(i) * c + ch] + v;
            sq += v * v;
        }
        cumsq_[i + 1] = cumsq_[i] + sq;
    }
}

void MomentTable::mean(int l, int r, double* out) const {
    const double len = r - l + 1;
    for (int ch = 0; ch < channels_; ++ch)
        out[ch] = (cum_[static_cast<size_t>(r + 1) * channels_ + ch] -
                   cum_[static_cast<size_t>(l) * channels_ + ch]) / len;
}

double MomentTable::deviation(int l, int r) const {
    const double len = r - l + 1;
    double s2 = cumsq_[r + 1] - cumsq_[l];
    double m2 = 0.0;
    for (int ch = 0; ch < channels_; ++ch) {
        double s = cum_[static_cast<size_t>(r + 1) * channels_ + ch] -
                   cum_[static_cast<size_t>(l) * channels_ + ch];
        m2 += s * s;
    }
    double d = s2 - m2 / len;
    return d > 0.0 ? d : 0.0;  // clamp accumulation noise
}

PottsSolution1D solve_potts_1d(const Signal1D& data, double gamma, bool pruning) {
    const int n = data.length;
    const int c = data.channels;
    if (n < 1) throw std::invalid_argument("solve_potts_1d: empty signal");
    if (!(gamma > 0.0)) throw std::invalid_argument("solve_potts_1d: gamma must be positive");
    for (double v : data.samples)
        if (!std::isfinite(v)) throw std::invalid_argument("solve_potts_1d: non-finite sample");

    MomentTable mt(data);

    // P[r] = optimal value for prefix f_1..f_r, P[0] = -gamma.
    std::vector<double> P(n + 1);
    std::vector<int> J(n + 1, 0);  // rightmost jump location of g^r
    P[0] = -gamma;

    double running_pmin = P[0];
    for (int r = 1; r <= n; ++r) {
        double best = std::numeric_limits<double>::infinity();
        int best_l = 1;
        // Descending scan: d[l,r] grows as l decreases, which lets the
        // running lower bound cut the loop early.
        for (int l = r; l >= 1; --l) {
            double d = mt.deviation(l - 1, r - 1);
            if (pruning && running_pmin + gamma + d > best) break;  // all l' <= l are strictly worse
            if (pruning && P[l - 1] + gamma > best) continue;
            double cand = P[l - 1] + gamma + d;
            if (cand <= best) {  // ties resolved toward the smallest l
                best = cand;
                best_l = l;
            }
        }
        P[r] = best;
        J[r] = best_l - 1;
        if (P[r] < running_pmin) running_pmin = P[r];
    }

    // Backtrack jump positions J(n), J(J(n)), ...
    std::vector<int> jumps;
    for (int r = J[n]; r > 0; r = J[r]) jumps.push_back(r);
    std::vector<int> positions(jumps.rbegin(), jumps.rend());

    PottsSolution1D sol;
    sol.jump_positions = positions;
    sol.energy = P[n];
    int start = 0;
    for (size_t k = 0; k <= positions.size(); ++k) {
        int end = (k < positions.size()) ? positions[k] : n;  // segment = [start, end)
        std::vector<double> mean_val(c);
        mt.mean(start, end - 1, mean_val.data());
        sol.segment_values.push_back(std::move(mean_val));
        start = end;
    }
    return sol;
}

Signal1D reconstruct_signal(const PottsSolution1D& sol, int length, int channels) {
    Signal1D g(length, channels);
    int start = 0;
    for (size_t k = 0; k < sol.segment_values.size(); ++k) {
        int end = (k < sol.jump_positions.size()) ? sol.jump_positions[k] : length;
        for (int i = start; i < end; ++i)
            for (int ch = 0; ch < channels; ++ch) g.at(i, ch) = sol.segment_values[k][ch];
        start = end;
    }
    return g;
}

double potts_energy_1d(const PottsSolution1D& sol, const Signal1D& data, double gamma) {
    Signal1D g = reconstruct_signal(sol, data.length, data.channels);
    if (g.samples.size() != data.samples.size())
        throw std::invalid_argument("potts_energy_1d: length mismatch");
    double fid = 0.0;
    for (size_t i = 0; i < data.samples.size(); ++i) {
        double d = g.samples[i] - data.samples[i];
        fid += d * d;
    }
    return gamma * static_cast<double>(sol.jump_positions.size()) + fid;
}

}  // namespace pottsrec
