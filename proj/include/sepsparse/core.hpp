#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "sepsparse/errors.hpp"
#include "sepsparse/wide_int.hpp"

namespace sepsparse {

/// Sorted set of 1-based signal indices.
struct Support {
    std::vector<Index> indices;

    Index size() const { return static_cast<Index>(indices.size()); }
    bool empty() const { return indices.empty(); }

    bool sorted_strict() const {
        for (std::size_t i = 1; i < indices.size(); ++i)
            if (indices[i] <= indices[i - 1]) return false;
        return true;
    }

    /// sep(Omega) >= delta: consecutive picks at least delta apart.
    bool separated_by(Index delta) const {
        for (std::size_t i = 1; i < indices.size(); ++i)
            if (indices[i] - indices[i - 1] < delta) return false;
        return true;
    }

    /// Membership in M_{k,Delta}.
    bool in_model(Index k, Index delta) const {
        return size() == k && sorted_strict() && separated_by(delta);
    }

    friend bool operator==(const Support& a, const Support& b) { return a.indices == b.indices; }
};

struct QuantizationConfig {
    int gamma = 32;  // bits of precision for quantized costs
};

/// A k-sparse Delta-separated selection exists iff the minimum span
/// (k-1)*delta + 1 fits in d (k = 0 is always feasible).
inline bool feasible_params(Index d, Index k, Index delta) {
    if (delta < 1 || k < 0 || d < 0) return false;
    return k == 0 || (k - 1) * delta + 1 <= d;
}

/// Maximization instance over M_{k,Delta}: pick k indices of `costs`,
/// pairwise at least `delta` apart, with maximum total cost.
struct ProjectionInstance {
    std::vector<WideInt> costs;  // non-negative after normalization
    Index d = 0;
    Index k = 0;
    Index delta = 1;

    ProjectionInstance() = default;

    /// Costs with negative entries are shifted up so the minimum becomes 0;
    /// the argmax is unchanged and all downstream arithmetic stays on
    /// non-negative integers.
    ProjectionInstance(std::vector<WideInt> c, Index sparsity, Index separation)
        : costs(std::move(c)), d(static_cast<Index>(costs.size())), k(sparsity), delta(separation) {
        if (d < 1) throw InvalidInputError("instance needs at least one coefficient");
        if (delta < 1) throw InvalidInputError("delta must be >= 1");
        if (k < 0) throw InvalidInputError("k must be >= 0");
        WideInt mn = costs[0];
        for (const WideInt& v : costs)
            if (v < mn) mn = v;
        if (mn < 0)
            for (WideInt& v : costs) v -= mn;
    }

    bool feasible() const { return feasible_params(d, k, delta); }

    WideInt value_of(const Support& s) const {
        WideInt total = 0;
        for (Index i : s.indices) total += costs[static_cast<std::size_t>(i - 1)];
        return total;
    }
};

/// Quantize a real signal to gamma-bit integer costs:
///   c_i = round(x_i^2 * 2^gamma / max_j x_j^2).
/// The all-zero signal maps to all-zero costs.
inline std::vector<WideInt> quantize_signal(std::span<const double> x, QuantizationConfig cfg = {}) {
    if (x.empty()) throw InvalidInputError("quantize_signal: empty signal");
    if (cfg.gamma < 1 || cfg.gamma > 62)
        throw InvalidInputError("quantize_signal: gamma must be in [1, 62]");
    double xmax = 0.0;
    for (double v : x) {
        if (!std::isfinite(v)) throw InvalidInputError("quantize_signal: non-finite entry");
        xmax = std::max(xmax, std::fabs(v));
    }
    std::vector<WideInt> c(x.size());
    if (xmax == 0.0) return c;
    const long double scale = std::ldexp(1.0L, cfg.gamma);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long double r = static_cast<long double>(x[i]) / xmax;
        c[i] = WideInt(std::llroundl(r * r * scale));
    }
    return c;
}

/// Visit every support in M_{k,Delta} over [d], in lexicographic order of
/// the index vector. The visitor receives a span of 1-based indices.
template <typename Visitor>
void enumerate_supports(Index d, Index k, Index delta, Visitor&& visit) {
    if (k == 0) {
        visit(std::span<const Index>());
        return;
    }
    if (!feasible_params(d, k, delta)) return;
    std::vector<Index> pick(static_cast<std::size_t>(k));
    auto rec = [&](auto&& self, Index from, Index depth) -> void {
        if (depth == k) {
            visit(std::span<const Index>(pick));
            return;
        }
        const Index tail = (k - depth - 1) * delta;  // room the remaining picks need
        for (Index i = from; i + tail <= d; ++i) {
            pick[static_cast<std::size_t>(depth)] = i;
            self(self, i + delta, depth + 1);
        }
    };
    rec(rec, 1, 0);
}

/// Exhaustive oracle: enumerate all of M_{k,Delta} and return a maximizer
/// together with the optimal value. Ties resolve to the lexicographically
/// smallest index vector, which keeps golden values stable.
inline std::pair<Support, WideInt> brute_force_project(const ProjectionInstance& inst,
                                                       Index dimension_cap = 24) {
    if (!inst.feasible()) throw InfeasibleError("brute_force_project: infeasible (d, k, delta)");
    if (inst.d > dimension_cap)
        throw InstanceTooLargeError("brute_force_project: d exceeds enumeration cap");
    Support best;
    WideInt best_value = -1;
    enumerate_supports(inst.d, inst.k, inst.delta, [&](std::span<const Index> s) {
        WideInt v = 0;
        for (Index i : s) v += inst.costs[static_cast<std::size_t>(i - 1)];
        if (v > best_value) {
            best_value = v;
            best.indices.assign(s.begin(), s.end());
        }
    });
    return {std::move(best), std::move(best_value)};
}

/// Number of supports of k blocks of length b whose starts are pairwise at
/// least delta + b - 1 apart (equivalently: at least delta between a block's
/// last index and the next block's first). For b = 1 this is |M_{k,Delta}|.
/// Infeasible parameter combinations count 0.
inline WideInt count_supports(Index d, Index k, Index delta, Index b = 1) {
    if (k < 0 || d < 0 || delta < 1 || b < 1) return 0;
    if (k == 0) return 1;
    const Index slack = d - (k - 1) * (delta + b - 1) - b;
    if (slack < 0) return 0;
    return binomial(slack + k, k);
}

/// Uniform sample from M_{k,Delta}: a uniformly random composition of the
/// slack d - (k-1)*Delta - 1 into k+1 parts, realized through the standard
/// bijection with k-subsets of [d - (k-1)(Delta-1)] (Floyd's sampler).
inline Support sample_support(Index d, Index k, Index delta, std::mt19937_64& rng) {
    if (!feasible_params(d, k, delta)) throw InfeasibleError("sample_support: infeasible (d, k, delta)");
    Support s;
    if (k == 0) return s;
    const Index m = d - (k - 1) * (delta - 1);
    std::vector<Index> chosen;
    chosen.reserve(static_cast<std::size_t>(k));
    for (Index j = m - k + 1; j <= m; ++j) {
        const Index t = static_cast<Index>(uniform_below(rng, WideInt(j))) + 1;
        if (std::find(chosen.begin(), chosen.end(), t) != chosen.end())
            chosen.push_back(j);
        else
            chosen.push_back(t);
    }
    std::sort(chosen.begin(), chosen.end());
    s.indices.resize(static_cast<std::size_t>(k));
    for (Index j = 0; j < k; ++j)
        s.indices[static_cast<std::size_t>(j)] = chosen[static_cast<std::size_t>(j)] + j * (delta - 1);
    return s;
}

}  // namespace sepsparse
