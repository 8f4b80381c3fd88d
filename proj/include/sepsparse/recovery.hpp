#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sepsparse/blocks.hpp"
#include "sepsparse/core.hpp"
#include "sepsparse/deterministic.hpp"
#include "sepsparse/dp.hpp"
#include "sepsparse/lagrangian.hpp"

namespace sepsparse {

enum class SparsityModel { StandardK, Separated, Blocks };

/// Sparse linear model y = X theta* + e with a ground truth whose support
/// respects the declared sparsity model. X is stored row-major (n x d).
struct RecoveryProblem {
    Index n = 0;
    Index d = 0;
    std::vector<double> design;  // row-major n x d
    std::vector<double> y;
    std::vector<double> theta_star;
    double noise_sigma = 0.0;
    SparsityModel model = SparsityModel::Separated;
    Index k = 0;
    Index delta = 1;
    Index b = 1;
};

/// Synthetic-instance parameters: k = floor(d / alpha) and
/// Delta = floor((d - beta * (k + 1)) / k - 1).
struct GeneratorParams {
    Index d = 0;
    double alpha = 50.0;
    double beta = 5.0;
    double sigma = 0.1;
    std::uint64_t seed = 0;
};

inline std::pair<Index, Index> derived_sparsity(const GeneratorParams& p) {
    if (p.d < 1 || p.alpha <= 0.0) throw InvalidParamsError("generator: d and alpha must be positive");
    const Index k = static_cast<Index>(std::floor(static_cast<double>(p.d) / p.alpha));
    if (k < 1) throw InvalidParamsError("generator: derived k < 1");
    const double delta_real = (static_cast<double>(p.d) - p.beta * static_cast<double>(k + 1)) /
                                  static_cast<double>(k) -
                              1.0;
    const Index delta = static_cast<Index>(std::floor(delta_real));
    if (delta < 1 || !feasible_params(p.d, k, delta))
        throw InvalidParamsError("generator: derived (k, delta) infeasible");
    return {k, delta};
}

struct GeneratedSignal {
    std::vector<double> signal;
    Support support;
    Index k = 0;
    Index delta = 1;
};

/// Separated spike train: support sampled uniformly from M_{k,Delta},
/// i.i.d. +-1 spikes, then i.i.d. Gaussian noise with the given sigma added
/// to every coordinate (the projection-benchmark variant).
inline GeneratedSignal generate_signal(Index d, Index k, Index delta, double sigma,
                                       std::uint64_t seed) {
    if (!feasible_params(d, k, delta)) throw InvalidParamsError("generate_signal: infeasible (d, k, delta)");
    std::mt19937_64 rng(seed);
    GeneratedSignal g;
    g.k = k;
    g.delta = delta;
    g.support = sample_support(d, k, delta, rng);
    g.signal.assign(static_cast<std::size_t>(d), 0.0);
    for (Index i : g.support.indices)
        g.signal[static_cast<std::size_t>(i - 1)] = (rng() & 1) ? 1.0 : -1.0;
    if (sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, sigma);
        for (double& v : g.signal) v += noise(rng);
    }
    return g;
}

inline GeneratedSignal generate_signal(const GeneratorParams& p) {
    auto [k, delta] = derived_sparsity(p);
    return generate_signal(p.d, k, delta, p.sigma, p.seed);
}

namespace detail {

// X with i.i.d. N(0, 1/n) entries and y = X theta* + e, e ~ N(0, sigma^2)^n.
inline void fill_measurements(RecoveryProblem& prob, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(prob.n));
    prob.design.resize(static_cast<std::size_t>(prob.n) * static_cast<std::size_t>(prob.d));
    for (double& v : prob.design) v = gauss(rng) * scale;
    prob.y.assign(static_cast<std::size_t>(prob.n), 0.0);
    for (Index r = 0; r < prob.n; ++r) {
        double acc = 0.0;
        const double* row = prob.design.data() + static_cast<std::size_t>(r) * prob.d;
        for (Index j = 0; j < prob.d; ++j)
            acc += row[j] * prob.theta_star[static_cast<std::size_t>(j)];
        prob.y[static_cast<std::size_t>(r)] = acc;
    }
    if (prob.noise_sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, prob.noise_sigma);
        for (double& v : prob.y) v += noise(rng);
    }
}

}  // namespace detail

/// Full recovery problem: theta* is the clean spike train, X has i.i.d.
/// N(0, 1/n) entries, and y = X theta* + e with e ~ N(0, sigma^2)^n.
inline RecoveryProblem generate_problem(Index d, Index k, Index delta, Index n, double sigma,
                                        std::uint64_t seed) {
    if (!feasible_params(d, k, delta)) throw InvalidParamsError("generate_problem: infeasible (d, k, delta)");
    if (n < 1) throw InvalidParamsError("generate_problem: n must be >= 1");
    RecoveryProblem prob;
    prob.n = n;
    prob.d = d;
    prob.noise_sigma = sigma;
    prob.model = SparsityModel::Separated;
    prob.k = k;
    prob.delta = delta;
    std::mt19937_64 rng(seed);
    Support supp = sample_support(d, k, delta, rng);
    prob.theta_star.assign(static_cast<std::size_t>(d), 0.0);
    for (Index i : supp.indices)
        prob.theta_star[static_cast<std::size_t>(i - 1)] = (rng() & 1) ? 1.0 : -1.0;
    detail::fill_measurements(prob, rng);
    return prob;
}

/// Recovery problem around a caller-supplied ground truth (e.g. a signal
/// loaded from disk); only the design and measurements are drawn.
inline RecoveryProblem generate_problem(std::vector<double> theta_star, Index k, Index delta,
                                        Index n, double sigma, std::uint64_t seed) {
    if (theta_star.empty()) throw InvalidParamsError("generate_problem: empty ground truth");
    if (n < 1) throw InvalidParamsError("generate_problem: n must be >= 1");
    RecoveryProblem prob;
    prob.n = n;
    prob.d = static_cast<Index>(theta_star.size());
    prob.noise_sigma = sigma;
    prob.model = SparsityModel::Separated;
    prob.k = k;
    prob.delta = delta;
    prob.theta_star = std::move(theta_star);
    std::mt19937_64 rng(seed);
    detail::fill_measurements(prob, rng);
    return prob;
}

/// Model projector used inside CoSaMP: given a real vector, return a support
/// (1-based) with at most `budget` indices. Implementations square the input
/// internally, so callers pass raw proxies/coefficients.
using Projector = std::function<std::vector<Index>(std::span<const double>, Index budget)>;

/// Plain top-k hard thresholding by magnitude.
inline Projector make_hard_threshold_projector() {
    return [](std::span<const double> v, Index budget) {
        const Index d = static_cast<Index>(v.size());
        std::vector<Index> order(static_cast<std::size_t>(d));
        for (Index i = 0; i < d; ++i) order[static_cast<std::size_t>(i)] = i + 1;
        const Index kk = std::min(budget, d);
        std::partial_sort(order.begin(), order.begin() + kk, order.end(), [&](Index a, Index b) {
            const double fa = std::fabs(v[static_cast<std::size_t>(a - 1)]);
            const double fb = std::fabs(v[static_cast<std::size_t>(b - 1)]);
            if (fa != fb) return fa > fb;
            return a < b;
        });
        order.resize(static_cast<std::size_t>(kk));
        std::sort(order.begin(), order.end());
        return order;
    };
}

enum class SeparatedEngine { Lassp, Recover, DpFolklore };

/// Exact separated-sparsity projector. Costs are the squared magnitudes
/// quantized to gamma bits; a budget beyond the largest sparsity feasible
/// at this Delta is clamped to it.
inline Projector make_separated_projector(Index delta, SeparatedEngine engine = SeparatedEngine::Lassp,
                                          int gamma = 32, std::uint64_t seed = 1) {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [delta, engine, gamma, rng](std::span<const double> v, Index budget) {
        const Index d = static_cast<Index>(v.size());
        const Index max_k = (d - 1) / delta + 1;
        const Index kk = std::min(budget, max_k);
        std::vector<WideInt> costs = quantize_signal(v, QuantizationConfig{gamma});
        Support s;
        switch (engine) {
            case SeparatedEngine::Lassp: {
                ProjectionInstance inst(std::move(costs), kk, delta);
                s = lassp(inst, *rng).support;
                break;
            }
            case SeparatedEngine::Recover:
                s = recover(costs, delta, kk).first;
                break;
            case SeparatedEngine::DpFolklore:
                s = dp_folklore(costs, delta, kk).first;
                break;
        }
        return s.indices;
    };
}

/// Block-model projector ((Delta, b) blocks). The budget counts blocks, not
/// indices; chosen block starts are expanded to full blocks.
inline Projector make_blocks_projector(Index delta, Index b, BlockEngine engine = BlockEngine::Recover,
                                       int gamma = 32) {
    return [delta, b, engine, gamma](std::span<const double> v, Index budget) {
        const Index d = static_cast<Index>(v.size());
        const Index sep = delta + b - 1;
        const Index m = d - b + 1;
        const Index max_blocks = (m - 1) / sep + 1;
        const Index kk = std::min(budget, max_blocks);
        std::vector<WideInt> costs = quantize_signal(v, QuantizationConfig{gamma});
        auto [starts, value] = project_blocks(costs, delta, b, kk, engine);
        std::vector<Index> out;
        for (Index p : starts.indices)
            for (Index j = 0; j < b; ++j) out.push_back(p + j);
        return out;
    };
}

struct CosampDiagnostics {
    std::vector<double> residual_norms;
    std::vector<double> projector_seconds;
    int iterations = 0;
    bool ls_flagged = false;  // least-squares solver hit its iteration cap
};

struct CosampResult {
    std::vector<double> theta_hat;
    CosampDiagnostics diagnostics;
};

namespace detail {

inline double norm2(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

// Least squares on the columns `cols` of X via conjugate gradients on the
// normal equations, started at zero (which yields the minimum-norm solution
// when the system is rank deficient). Returns false when the relative
// tolerance was not reached within the iteration cap.
inline bool ls_on_support(const RecoveryProblem& prob, const std::vector<Index>& cols,
                          std::vector<double>& coef, double tol = 1e-10, int max_iter = 200) {
    const Index n = prob.n;
    const std::size_t m = cols.size();
    coef.assign(m, 0.0);
    if (m == 0) return true;
    auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
        // out = A^T A x with A = X[:, cols]
        std::vector<double> ax(static_cast<std::size_t>(n), 0.0);
        for (Index r = 0; r < n; ++r) {
            const double* row = prob.design.data() + static_cast<std::size_t>(r) * prob.d;
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc += row[cols[j] - 1] * x[j];
            ax[static_cast<std::size_t>(r)] = acc;
        }
        out.assign(m, 0.0);
        for (Index r = 0; r < n; ++r) {
            const double* row = prob.design.data() + static_cast<std::size_t>(r) * prob.d;
            const double a = ax[static_cast<std::size_t>(r)];
            for (std::size_t j = 0; j < m; ++j) out[j] += row[cols[j] - 1] * a;
        }
    };
    std::vector<double> b(m, 0.0);
    for (Index r = 0; r < n; ++r) {
        const double* row = prob.design.data() + static_cast<std::size_t>(r) * prob.d;
        const double yr = prob.y[static_cast<std::size_t>(r)];
        for (std::size_t j = 0; j < m; ++j) b[j] += row[cols[j] - 1] * yr;
    }
    std::vector<double> resid = b;
    std::vector<double> dir = b;
    std::vector<double> tmp;
    double rr = 0.0;
    for (double x : resid) rr += x * x;
    const double target = tol * tol * std::max(rr, 1e-300);
    for (int it = 0; it < max_iter; ++it) {
        if (rr <= target) return true;
        apply(dir, tmp);
        double dtd = 0.0;
        for (std::size_t j = 0; j < m; ++j) dtd += dir[j] * tmp[j];
        if (dtd <= 0.0) return true;  // numerically singular direction; stop
        const double alpha = rr / dtd;
        for (std::size_t j = 0; j < m; ++j) {
            coef[j] += alpha * dir[j];
            resid[j] -= alpha * tmp[j];
        }
        double rr_new = 0.0;
        for (double x : resid) rr_new += x * x;
        const double beta = rr_new / rr;
        for (std::size_t j = 0; j < m; ++j) dir[j] = resid[j] + beta * dir[j];
        rr = rr_new;
    }
    return rr <= target;
}

}  // namespace detail

/// Structure-aware CoSaMP. Per iteration: form the proxy X^T (y - X theta),
/// merge a 2k-budget candidate set from the proxy with the current support,
/// solve least squares on the merged support, and project the solution back
/// onto the model (k budget). Stops when the iterate moves by at most
/// tol * ||theta|| or after max_iters iterations.
///
/// The 2k-budget identification projects twice with budget k, zeroing the
/// first winners before the second pass. For hard thresholding this is
/// exactly the classic top-2k rule; for structured models it approximates
/// the projection onto the sum model (union of two model supports), which
/// is what the identification step needs. A single M_{2k,Delta} projection
/// is useless here: at realistic parameters 2k separated indices do not fit,
/// and the clamped maximal packing degenerates to a rigid grid that cannot
/// contain the true support.
inline CosampResult cosamp(const RecoveryProblem& prob, const Projector& projector,
                           int max_iters = 50, double tol = 1e-8) {
    CosampResult res;
    res.theta_hat.assign(static_cast<std::size_t>(prob.d), 0.0);
    std::vector<double> theta_old(static_cast<std::size_t>(prob.d), 0.0);
    std::vector<double> residual = prob.y;
    std::vector<double> proxy(static_cast<std::size_t>(prob.d), 0.0);
    std::vector<double> coef;
    for (int t = 0; t < max_iters; ++t) {
        // proxy = X^T residual
        for (Index j = 0; j < prob.d; ++j) proxy[static_cast<std::size_t>(j)] = 0.0;
        for (Index r = 0; r < prob.n; ++r) {
            const double* row = prob.design.data() + static_cast<std::size_t>(r) * prob.d;
            const double rv = residual[static_cast<std::size_t>(r)];
            for (Index j = 0; j < prob.d; ++j) proxy[static_cast<std::size_t>(j)] += row[j] * rv;
        }
        auto t0 = std::chrono::steady_clock::now();
        std::vector<Index> merged = projector(proxy, prob.k);
        std::vector<double> peeled = proxy;
        for (Index i : merged) peeled[static_cast<std::size_t>(i - 1)] = 0.0;
        std::vector<Index> second = projector(peeled, prob.k);
        merged.insert(merged.end(), second.begin(), second.end());
        auto t1 = std::chrono::steady_clock::now();
        for (Index i = 0; i < prob.d; ++i)
            if (res.theta_hat[static_cast<std::size_t>(i)] != 0.0) merged.push_back(i + 1);
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

        if (static_cast<Index>(merged.size()) > prob.n) res.diagnostics.ls_flagged = true;
        if (!detail::ls_on_support(prob, merged, coef)) res.diagnostics.ls_flagged = true;
        std::vector<double> embedded(static_cast<std::size_t>(prob.d), 0.0);
        for (std::size_t j = 0; j < merged.size(); ++j)
            embedded[static_cast<std::size_t>(merged[j] - 1)] = coef[j];

        auto t2 = std::chrono::steady_clock::now();
        std::vector<Index> final_supp = projector(embedded, prob.k);
        auto t3 = std::chrono::steady_clock::now();
        res.diagnostics.projector_seconds.push_back(std::chrono::duration<double>(t1 - t0).count() +
                                                    std::chrono::duration<double>(t3 - t2).count());

        std::swap(theta_old, res.theta_hat);
        std::fill(res.theta_hat.begin(), res.theta_hat.end(), 0.0);
        for (Index i : final_supp)
            res.theta_hat[static_cast<std::size_t>(i - 1)] = embedded[static_cast<std::size_t>(i - 1)];

        // residual = y - X theta
        for (Index r = 0; r < prob.n; ++r) {
            const double* row = prob.design.data() + static_cast<std::size_t>(r) * prob.d;
            double acc = 0.0;
            for (Index j = 0; j < prob.d; ++j) acc += row[j] * res.theta_hat[static_cast<std::size_t>(j)];
            residual[static_cast<std::size_t>(r)] = prob.y[static_cast<std::size_t>(r)] - acc;
        }
        res.diagnostics.residual_norms.push_back(detail::norm2(residual));
        res.diagnostics.iterations = t + 1;

        double move = 0.0, base = 0.0;
        for (Index j = 0; j < prob.d; ++j) {
            const double dv =
                res.theta_hat[static_cast<std::size_t>(j)] - theta_old[static_cast<std::size_t>(j)];
            move += dv * dv;
            base += theta_old[static_cast<std::size_t>(j)] * theta_old[static_cast<std::size_t>(j)];
        }
        if (std::sqrt(move) <= tol * std::sqrt(base)) break;
    }
    return res;
}

/// Euclidean distance between an estimate and the ground truth.
inline double recovery_error(std::span<const double> theta_hat, std::span<const double> theta_star) {
    if (theta_hat.size() != theta_star.size())
        throw InvalidInputError("recovery_error: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < theta_hat.size(); ++i) {
        const double d = theta_hat[i] - theta_star[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

inline std::vector<Index> nonzero_support(std::span<const double> v) {
    std::vector<Index> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) out.push_back(static_cast<Index>(i) + 1);
    return out;
}

}  // namespace sepsparse
