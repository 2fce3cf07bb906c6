#include "pottsrec/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace pottsrec {

double rand_index(const std::vector<int>& p, const std::vector<int>& q) {
    const size_t n = p.size();
    if (n != q.size()) throw std::invalid_argument("rand_index: size mismatch");
    if (n < 2) throw std::invalid_argument("rand_index: need at least two elements");

    // contingency table via hashed label pairs
    std::unordered_map<int, double> row_counts, col_counts;
    std::unordered_map<long long, double> cell_counts;
    for (size_t i = 0; i < n; ++i) {
        row_counts[p[i]] += 1.0;
        col_counts[q[i]] += 1.0;
        cell_counts[(static_cast<long long>(p[i]) << 32) ^ static_cast<unsigned>(q[i])] += 1.0;
    }
    auto pairs = [](double m) { return m * (m - 1.0) / 2.0; };
    double total = pairs(static_cast<double>(n));
    double sum_rows = 0.0, sum_cols = 0.0, sum_cells = 0.0;
    for (auto& [k, m] : row_counts) sum_rows += pairs(m);
    for (auto& [k, m] : col_counts) sum_cols += pairs(m);
    for (auto& [k, m] : cell_counts) sum_cells += pairs(m);
    // agreements = together-together + apart-apart
    return (total + 2.0 * sum_cells - sum_rows - sum_cols) / total;
}

double psnr(const Image& u, const Image& g) {
    if (!u.same_shape(g)) throw std::invalid_argument("psnr: shape mismatch");
    double peak = 0.0;
    for (double v : g.data) peak = std::max(peak, std::abs(v));
    double err = 0.0;
    for (size_t i = 0; i < u.size(); ++i) {
        double d = u.data[i] - g.data[i];
        err += d * d;
    }
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(static_cast<double>(g.size()) * peak * peak / err);
}

}  // namespace pottsrec
