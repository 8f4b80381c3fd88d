#pragma once

#include <cassert>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "sepsparse/core.hpp"

namespace sepsparse {

/// Feasible point of the dual LP D(c, k): variable w0 plus one w_i >= 0 per
/// coefficient; constraint i reads  w0 + sum_{j : j <= i <= j+Delta-1} w_j >= c_i.
struct DualSolution {
    WideInt w0;
    std::vector<WideInt> w;  // w[i] holds w_{i+1}
    WideInt objective;       // w0 * k + sum_i w_i
};

/// Tight dual constraints that grow when w0 drops by an infinitesimal;
/// pairwise at least Delta apart.
struct ActiveSet {
    std::vector<Index> indices;  // 1-based, sorted

    Index size() const { return static_cast<Index>(indices.size()); }
};

/// Lazy left-to-right solver for D_lambda: walk the constraints keeping the
/// sliding sum of the last Delta variables, and raise w_i just enough to make
/// a violated constraint i tight. Optimal among feasible duals with w0 fixed.
inline DualSolution dual_greedy(std::span<const WideInt> c, Index delta, const WideInt& lambda,
                                Index k) {
    const Index d = static_cast<Index>(c.size());
    DualSolution sol;
    sol.w0 = lambda;
    sol.w.assign(static_cast<std::size_t>(d), WideInt(0));
    WideInt window = 0;  // sum of w_{i-Delta+1} .. w_{i-1}
    WideInt total = 0;
    for (Index i = 0; i < d; ++i) {
        if (i >= delta) window -= sol.w[static_cast<std::size_t>(i - delta)];
        WideInt diff = c[static_cast<std::size_t>(i)] - sol.w0 - window;
        if (diff > 0) {
            sol.w[static_cast<std::size_t>(i)] = diff;
            total += diff;
            window += diff;
        }
    }
    sol.objective = sol.w0 * k + total;
    return sol;
}

namespace detail {

template <typename T>
T dual_objective_loop(const std::vector<T>& c, Index delta, const T& lambda, Index k,
                      std::vector<T>& ring) {
    const Index d = static_cast<Index>(c.size());
    ring.assign(static_cast<std::size_t>(delta), T(0));
    T window = 0;
    T total = 0;
    for (Index i = 0; i < d; ++i) {
        T& slot = ring[static_cast<std::size_t>(i % delta)];  // currently w_{i-Delta}
        if (i >= delta) window -= slot;
        T diff = c[static_cast<std::size_t>(i)] - lambda - window;
        if (diff > 0) {
            slot = diff;
            window += diff;
            total += diff;
        } else {
            slot = 0;
        }
    }
    return lambda * k + total;
}

/// Value-only evaluator for val(D_lambda). When an a-priori bound shows every
/// intermediate fits a signed 128-bit integer, evaluations run on Int128;
/// otherwise they run on WideInt. The bound covers all lambda in [lb, ub].
class DualValueOracle {
  public:
    DualValueOracle(std::span<const WideInt> c, Index delta, Index k, const WideInt& lb,
                    const WideInt& ub)
        : costs_(c), delta_(delta), k_(k) {
        const Index d = static_cast<Index>(c.size());
        WideInt cmax = 0;
        for (const WideInt& v : c)
            if (v > cmax) cmax = v;
        WideInt lmax = abs(lb);
        if (abs(ub) > lmax) lmax = abs(ub);
        // Every w_i, window sum, diff and objective is bounded in magnitude by
        // (d + k + 2) * (cmax + lmax); see the derivation alongside the tests.
        const WideInt bound = WideInt(d + k + 2) * (cmax + lmax);
#if SEPSPARSE_HAS_INT128
        if (bound <= WideInt(int128_max())) {
            fast_ = true;
            fast_costs_.reserve(c.size());
            for (const WideInt& v : c) fast_costs_.push_back(static_cast<Int128>(v));
        }
#endif
        if (!fast_) wide_costs_.assign(c.begin(), c.end());
    }

    WideInt operator()(const WideInt& lambda) {
        auto it = memo_.find(lambda);
        if (it != memo_.end()) return it->second;
        WideInt value;
#if SEPSPARSE_HAS_INT128
        if (fast_) {
            value = WideInt(
                dual_objective_loop<Int128>(fast_costs_, delta_, static_cast<Int128>(lambda), k_, fast_ring_));
        } else
#endif
        {
            value = dual_objective_loop<WideInt>(wide_costs_, delta_, lambda, k_, wide_ring_);
        }
        memo_.emplace(lambda, value);
        return value;
    }

  private:
    std::span<const WideInt> costs_;
    Index delta_;
    Index k_;
    bool fast_ = false;
#if SEPSPARSE_HAS_INT128
    std::vector<Int128> fast_costs_;
    std::vector<Int128> fast_ring_;
#endif
    std::vector<WideInt> wide_costs_;
    std::vector<WideInt> wide_ring_;
    std::map<WideInt, WideInt> memo_;
};

}  // namespace detail

/// Objective of dual_greedy(c, lambda) without materializing the w vector.
inline WideInt dual_objective(std::span<const WideInt> c, Index delta, const WideInt& lambda,
                              Index k) {
    std::vector<WideInt> wide(c.begin(), c.end());
    std::vector<WideInt> ring;
    return detail::dual_objective_loop<WideInt>(wide, delta, lambda, k, ring);
}

/// Active constraints of a dual_greedy solution (left-to-right scan): index i
/// joins when its constraint is tight and the previous active index is at
/// least Delta to the left.
inline ActiveSet active_constraints(std::span<const WideInt> c, Index delta,
                                    const DualSolution& sol) {
    const Index d = static_cast<Index>(c.size());
    ActiveSet active;
    WideInt window = 0;
    Index last_active = std::numeric_limits<Index>::min() / 2;
    for (Index i = 0; i < d; ++i) {
        if (i >= delta) window -= sol.w[static_cast<std::size_t>(i - delta)];
        window += sol.w[static_cast<std::size_t>(i)];
        if (last_active <= (i + 1) - delta && c[static_cast<std::size_t>(i)] - (sol.w0 + window) == 0) {
            active.indices.push_back(i + 1);
            last_active = i + 1;
        }
    }
    return active;
}

namespace detail {

struct DualMinimum {
    WideInt lambda;
    WideInt value;
};

/// Ternary search for a minimizer of the convex integer function
/// lambda -> val(D_lambda) over [lb, ub]. Comparison rule: on f(l) <= f(r)
/// the right third is discarded (e <- r - 1), otherwise the left (s <- l + 1).
inline DualMinimum ternary_search_min(DualValueOracle& val, WideInt lb, WideInt ub) {
    WideInt s = std::move(lb);
    WideInt e = std::move(ub);
    DualMinimum best;
    bool have = false;
    while (s <= e) {
        WideInt third = (e - s) / 3;
        WideInt l = s + third;
        WideInt r = e - third;
        WideInt fl = val(l);
        WideInt fr = val(r);
        if (fl <= fr) {
            e = r - 1;
            best = {l, fl};
        } else {
            s = l + 1;
            best = {r, fr};
        }
        have = true;
    }
    assert(have);
    (void)have;
    return best;
}

}  // namespace detail

/// Minimize the dual objective over integer w0 in [lb, ub] (defaults:
/// [-(k-1)*cmax, cmax], which always brackets an optimum). By strong duality
/// the returned objective equals the optimal projection value.
inline DualSolution opt_value_of_dual(std::span<const WideInt> c, Index delta, Index k,
                                      std::optional<WideInt> lb = std::nullopt,
                                      std::optional<WideInt> ub = std::nullopt) {
    const Index d = static_cast<Index>(c.size());
    if (!feasible_params(d, k, delta))
        throw InfeasibleError("opt_value_of_dual: infeasible (d, k, delta)");
    WideInt cmax = 0;
    for (const WideInt& v : c)
        if (v > cmax) cmax = v;
    WideInt lo = lb ? *lb : WideInt(-(k - 1) * cmax);
    WideInt hi = ub ? *ub : cmax;
    if (lo > hi) throw InvalidInputError("opt_value_of_dual: empty search interval");
    detail::DualValueOracle val(c, delta, k, lo, hi);
    detail::DualMinimum m = detail::ternary_search_min(val, lo, hi);
    DualSolution sol = dual_greedy(c, delta, m.lambda, k);
    assert(sol.objective == m.value);
    return sol;
}

/// Largest integer lambda minimizing val(D_lambda): ternary search for the
/// minimum, then a binary search along the plateau (minimizers of a convex
/// function over the integers form an interval).
inline WideInt max_integer_minimizer_lambda(std::span<const WideInt> c, Index delta, Index k) {
    const Index d = static_cast<Index>(c.size());
    if (!feasible_params(d, k, delta))
        throw InfeasibleError("max_integer_minimizer_lambda: infeasible (d, k, delta)");
    WideInt cmax = 0;
    for (const WideInt& v : c)
        if (v > cmax) cmax = v;
    WideInt lo = -(k - 1) * cmax;
    WideInt hi = cmax;
    detail::DualValueOracle val(c, delta, k, lo, hi);
    detail::DualMinimum m = detail::ternary_search_min(val, lo, hi);
    WideInt a = m.lambda;
    WideInt b = hi;
    while (a < b) {
        WideInt mid = a + (b - a + 1) / 2;
        if (val(mid) == m.value)
            a = mid;
        else
            b = mid - 1;
    }
    return a;
}

}  // namespace sepsparse
