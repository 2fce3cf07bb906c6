#include "pottsrec/admm.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "pottsrec/potts1d.hpp"

namespace pottsrec {

AdmmState AdmmState::zeros(int width, int height, int channels, int S) {
    AdmmState st;
    st.u.assign(S, Image(width, height, channels));
    st.v = Image(width, height, channels);
    st.lambda.assign(S, Image(width, height, channels));
    st.rho.assign(static_cast<size_t>(S) * (S - 1) / 2, Image(width, height, channels));
    st.jump_counts.assign(S, 0);
    st.k = 1;
    return st;
}

Image& AdmmState::rho_at(int r, int t) {
    const int S = static_cast<int>(u.size());
    return rho[static_cast<size_t>(r) * S - static_cast<size_t>(r) * (r + 1) / 2 + (t - r - 1)];
}

std::vector<std::vector<int>> chains_for_displacement(int width, int height, int px, int py) {
    if (px == 0 && py == 0) throw std::invalid_argument("chains_for_displacement: zero displacement");
    std::vector<std::vector<int>> chains;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            int bx = x - px, by = y - py;
            if (bx >= 0 && bx < width && by >= 0 && by < height) continue;  // has a predecessor
            std::vector<int> chain;
            int cx = x, cy = y;
            while (cx >= 0 && cx < width && cy >= 0 && cy < height) {
                chain.push_back(cy * width + cx);
                cx += px;
                cy += py;
            }
            chains.push_back(std::move(chain));
        }
    }
    return chains;
}

namespace {

// Solve the chainwise Potts problems of one split variable in place.
long potts_sweep(Image& u, const Image& anchor, double gamma_eff, int px, int py) {
    const int C = anchor.channels;
    auto chains = chains_for_displacement(anchor.width, anchor.height, px, py);
    long jumps = 0;
    for (const auto& chain : chains) {
        const int n = static_cast<int>(chain.size());
        if (n == 1) {
            for (int c = 0; c < C; ++c)
                u.data[static_cast<size_t>(chain[0]) * C + c] =
                    anchor.data[static_cast<size_t>(chain[0]) * C + c];
            continue;
        }
        Signal1D sig(n, C);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < C; ++c)
                sig.at(i, c) = anchor.data[static_cast<size_t>(chain[i]) * C + c];
        PottsSolution1D sol = solve_potts_1d(sig, gamma_eff);
        jumps += static_cast<long>(sol.jump_positions.size());
        Signal1D rec = reconstruct_signal(sol, n, C);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < C; ++c)
                u.data[static_cast<size_t>(chain[i]) * C + c] = rec.at(i, c);
    }
    return jumps;
}

}  // namespace

bool admm_step(AdmmState& state, const ProxFn& prox, const PottsConfig& config,
               const CouplingSchedule& schedule, std::string* certificate_failure) {
    const int S = config.neighborhood.size();
    const double mu = schedule.mu(state.k);
    const double nu = schedule.nu(state.k, S);
    const double denom = mu + nu * (S - 1);
    const double L = static_cast<double>(state.v.pixels());

    Image anchor = Image::zeros_like(state.v);
    for (int s = 0; s < S; ++s) {
        // w_s of the splitting: mu v + lambda_s + sum_{r<s}(nu u_r^{new} + rho_{r,s})
        //                       + sum_{t>s}(nu u_t^{old} - rho_{s,t}), over mu + nu(S-1)
        for (size_t i = 0; i < anchor.size(); ++i) {
            double acc = mu * state.v.data[i] + state.lambda[s].data[i];
            for (int r = 0; r < s; ++r)
                acc += nu * state.u[r].data[i] + state.rho_at(r, s).data[i];
            for (int t = s + 1; t < S; ++t)
                acc += nu * state.u[t].data[i] - state.rho_at(s, t).data[i];
            anchor.data[i] = acc / denom;
        }
        const double gamma_eff = 2.0 * config.gamma * config.neighborhood.weights[s] / denom;
        state.jump_counts[s] = potts_sweep(state.u[s], anchor, gamma_eff,
                                           config.neighborhood.displacements[s][0],
                                           config.neighborhood.displacements[s][1]);
        if (nu == 0.0) {
            // per-iteration certificate ||u_s - (v + lambda_s/mu)||^2 <= gamma w_s L / mu
            double d = dist2(state.u[s], anchor);
            double bound = config.gamma * config.neighborhood.weights[s] * L / mu;
            if (d * d > bound) {
                if (certificate_failure) {
                    std::ostringstream os;
                    os << "certificate violated at k=" << state.k << " s=" << s
                       << ": " << d * d << " > " << bound;
                    *certificate_failure = os.str();
                }
                return false;
            }
        }
    }

    Image z = Image::zeros_like(state.v);
    for (size_t i = 0; i < z.size(); ++i) {
        double acc = 0.0;
        for (int s = 0; s < S; ++s)
            acc += state.u[s].data[i] - state.lambda[s].data[i] / mu;
        z.data[i] = acc / S;
    }
    state.v = prox(z, mu * S, &state.v);

    for (int s = 0; s < S; ++s)
        for (size_t i = 0; i < state.lambda[s].size(); ++i)
            state.lambda[s].data[i] += mu * (state.v.data[i] - state.u[s].data[i]);
    if (nu > 0.0)
        for (int r = 0; r < S; ++r)
            for (int t = r + 1; t < S; ++t) {
                Image& rho = state.rho_at(r, t);
                for (size_t i = 0; i < rho.size(); ++i)
                    rho.data[i] += nu * (state.u[r].data[i] - state.u[t].data[i]);
            }
    ++state.k;
    return true;
}

AdmmResult run(const ForwardOperator& A, const DataVolume& f, const PottsConfig& config,
               const CouplingSchedule& schedule, ProxFn prox) {
    if (!(config.gamma > 0.0)) throw std::invalid_argument("admm run: gamma must be positive");
    if (config.neighborhood.size() < 2)
        throw std::invalid_argument("admm run: need at least two displacements");
    if (!prox) prox = make_l2_prox(A, f, config.cg);

    const int S = config.neighborhood.size();
    AdmmState state = AdmmState::zeros(A.image_width(), A.image_height(), A.image_channels(), S);

    AdmmResult res;
    std::string failure;
    while (state.k <= config.max_iterations) {
        const int k = state.k;
        const double mu = schedule.mu(k);
        if (!admm_step(state, prox, config, schedule, &failure)) {
            res.diagnostics.aborted = true;
            res.diagnostics.abort_reason = failure;
            break;
        }

        IterationRecord rec;
        rec.k = k;
        rec.mu = mu;
        rec.nu = schedule.nu(k, S);
        for (int s = 0; s < S; ++s) rec.split_residuals.push_back(dist2(state.u[s], state.v));
        double n1 = norm2(state.u[0]);
        double n2 = norm2(state.u[1]);
        rec.stop_value = (n1 + n2 > 0.0) ? dist2(state.u[0], state.u[1]) / (n1 + n2) : 0.0;
        for (int s = 0; s < S; ++s)
            rec.multiplier_norm = std::max(rec.multiplier_norm, norm2(state.lambda[s]) / mu);
        DataVolume av = A.apply(state.v);
        double fid = 0.0;
        for (size_t i = 0; i < av.size(); ++i) {
            double d = av.data[i] - f.data[i];
            fid += d * d;
        }
        rec.data_residual = std::sqrt(fid);
        rec.objective = fid;
        for (int s = 0; s < S; ++s)
            rec.objective += config.gamma * config.neighborhood.weights[s] * state.jump_counts[s];
        res.diagnostics.history.push_back(rec);
        res.diagnostics.iterations = k;

        // k = 1 starts from the all-zero state, where the gap is trivially zero
        if (k > 1 && rec.stop_value < config.stop_tolerance) {
            res.diagnostics.converged = true;
            break;
        }
    }
    res.v = state.v;
    res.labels = extract_labels(
        res.v, config.merge_tolerance.value_or(default_merge_tolerance(res.v)));
    return res;
}

LabelMap extract_labels(const Image& v, double merge_tolerance) {
    LabelMap lm;
    lm.width = v.width;
    lm.height = v.height;
    lm.labels.assign(v.pixels(), -1);
    const int C = v.channels;
    auto joined = [&](int a, int b) {
        for (int c = 0; c < C; ++c)
            if (std::abs(v.data[static_cast<size_t>(a) * C + c] - v.data[static_cast<size_t>(b) * C + c]) >
                merge_tolerance)
                return false;
        return true;
    };
    int next = 0;
    std::queue<int> q;
    for (int start = 0; start < static_cast<int>(v.pixels()); ++start) {
        if (lm.labels[start] >= 0) continue;
        lm.labels[start] = next;
        q.push(start);
        while (!q.empty()) {
            int p = q.front();
            q.pop();
            int x = p % v.width, y = p / v.width;
            const int nx[4] = {x - 1, x + 1, x, x};
            const int ny[4] = {y, y, y - 1, y + 1};
            for (int i = 0; i < 4; ++i) {
                if (nx[i] < 0 || nx[i] >= v.width || ny[i] < 0 || ny[i] >= v.height) continue;
                int np = ny[i] * v.width + nx[i];
                if (lm.labels[np] >= 0 || !joined(p, np)) continue;
                lm.labels[np] = next;
                q.push(np);
            }
        }
        ++next;
    }
    lm.label_count = next;
    return lm;
}

double default_merge_tolerance(const Image& v) {
    auto [lo, hi] = std::minmax_element(v.data.begin(), v.data.end());
    double range = (v.data.empty()) ? 0.0 : *hi - *lo;
    return 1e-6 * (range > 0.0 ? range : 1.0);
}

double potts_objective(const ForwardOperator& A, const DataVolume& f, const Image& v, double gamma,
                       const NeighborhoodSystem& nbhd, double jump_tolerance) {
    DataVolume av = A.apply(v);
    double obj = 0.0;
    for (size_t i = 0; i < av.size(); ++i) {
        double d = av.data[i] - f.data[i];
        obj += d * d;
    }
    const int C = v.channels;
    for (int s = 0; s < nbhd.size(); ++s) {
        int px = nbhd.displacements[s][0], py = nbhd.displacements[s][1];
        long jumps = 0;
        for (int y = 0; y < v.height; ++y)
            for (int x = 0; x < v.width; ++x) {
                int x2 = x + px, y2 = y + py;
                if (x2 < 0 || x2 >= v.width || y2 < 0 || y2 >= v.height) continue;
                for (int c = 0; c < C; ++c)
                    if (std::abs(v.at(x, y, c) - v.at(x2, y2, c)) > jump_tolerance) {
                        ++jumps;
                        break;
                    }
            }
        obj += gamma * nbhd.weights[s] * jumps;
    }
    return obj;
}

ProxFn make_l2_prox(const ForwardOperator& A, const DataVolume& f, const CgConfig& cg) {
    return [&A, f, cg](const Image& z, double w, const Image* warm) {
        return solve_cg(A, f, z, w, cg, warm).v;
    };
}

ProxFn make_deconv_prox(const ConvolutionKernel& kernel, const DataVolume& f) {
    return [kernel, f](const Image& z, double w, const Image*) {
        return solve_deconv_frequency(kernel, f, z, w);
    };
}

ProxFn make_radon_filtered_prox(const RadonOperator& op, const DataVolume& f) {
    return [&op, f](const Image& z, double w, const Image*) {
        return solve_radon_filtered(f, z, w / 2.0, op);
    };
}

}  // namespace pottsrec
