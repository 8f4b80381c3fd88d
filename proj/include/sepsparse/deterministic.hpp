#pragma once

#include <algorithm>
#include <cassert>
#include <span>
#include <utility>
#include <vector>

#include "sepsparse/core.hpp"
#include "sepsparse/dual.hpp"

namespace sepsparse {

/// Sparsity budget split produced by distribute_sparsity for the masked
/// window [s, e]: some optimum places k_left picks before s and k_right
/// picks after e.
struct SparsitySplit {
    Index k_left = 0;
    Index k_right = 0;
    Index s = 0;
    Index e = 0;
};

namespace detail {

// c'' with ones on [ban_lo, ban_hi] (1-based, inclusive) and c_i + shift
// elsewhere. shift = 1 realizes the Delta-recovery masking; larger shifts
// realize the "minus infinity" window of Distribute-Sparsity exactly.
inline std::vector<WideInt> masked_costs(std::span<const WideInt> c, Index ban_lo, Index ban_hi,
                                         const WideInt& shift) {
    std::vector<WideInt> out(c.size());
    for (Index i = 1; i <= static_cast<Index>(c.size()); ++i) {
        if (i >= ban_lo && i <= ban_hi)
            out[static_cast<std::size_t>(i - 1)] = 1;
        else
            out[static_cast<std::size_t>(i - 1)] = c[static_cast<std::size_t>(i - 1)] + shift;
    }
    return out;
}

// Variant with two banned intervals (window minus a kept sub-interval).
inline std::vector<WideInt> masked_costs_except(std::span<const WideInt> c, Index win_lo,
                                                Index win_hi, Index keep_lo, Index keep_hi) {
    std::vector<WideInt> out(c.size());
    for (Index i = 1; i <= static_cast<Index>(c.size()); ++i) {
        const bool banned = i >= win_lo && i <= win_hi && !(i >= keep_lo && i <= keep_hi);
        if (banned)
            out[static_cast<std::size_t>(i - 1)] = 1;
        else
            out[static_cast<std::size_t>(i - 1)] = c[static_cast<std::size_t>(i - 1)] + 1;
    }
    return out;
}

}  // namespace detail

/// Probe the window [j_s, min(j_s+Delta-1, d)]. Returns -1 when some optimal
/// k-sparse solution avoids the window entirely, certified by
///   val(D(c'', k)) == val(D(c, k)) + k
/// for the masked costs c'' (ones inside the window, c_i + 1 outside).
/// Otherwise binary-searches the window and returns an index r that some
/// optimal solution selects.
inline Index delta_recovery(std::span<const WideInt> c, Index delta, Index k, Index j_s) {
    const Index d = static_cast<Index>(c.size());
    if (!feasible_params(d, k, delta)) throw InfeasibleError("delta_recovery: infeasible (d, k, delta)");
    if (j_s < 1 || j_s > d) throw InvalidInputError("delta_recovery: j_s out of range");
    // The masking certificate tells a banned index apart from a kept one by
    // a margin of 1, which needs strictly positive costs. Shifting every
    // cost by +1 keeps the optimal supports unchanged (all have k picks).
    std::vector<WideInt> shifted;
    std::span<const WideInt> costs = c;
    for (const WideInt& v : c) {
        if (v < 1) {
            shifted.assign(c.begin(), c.end());
            for (WideInt& w : shifted) w += 1;
            costs = shifted;
            break;
        }
    }
    const Index j_e = std::min(j_s + delta - 1, d);
    const WideInt opt = opt_value_of_dual(costs, delta, k).objective;
    {
        std::vector<WideInt> banned = detail::masked_costs(costs, j_s, j_e, WideInt(1));
        if (opt_value_of_dual(banned, delta, k).objective == opt + k) return -1;
    }
    Index s = j_s;
    Index e = j_e;
    while (s < e) {
        const Index mid = (s + e) / 2;
        std::vector<WideInt> probe = detail::masked_costs_except(costs, j_s, j_e, s, mid);
        if (opt_value_of_dual(probe, delta, k).objective == opt + k)
            e = mid;
        else
            s = mid + 1;
    }
    return s;
}

/// Split the sparsity budget k'' around the banned window [s, e]
/// (requires e - s + 1 >= Delta, or e == d). The window is excluded through
/// the exact shift trick; active-constraint counts at the optimal w0 and at
/// w0 + 1 determine how many picks an optimum places on each side.
inline SparsitySplit distribute_sparsity(std::span<const WideInt> c, Index delta, Index k_pp,
                                         Index s, Index e) {
    const Index d = static_cast<Index>(c.size());
    if (s < 1 || e < s || e > d) throw InvalidInputError("distribute_sparsity: bad window");
    if (!(e - s + 1 >= delta || e == d))
        throw InfeasibleError("distribute_sparsity: window shorter than Delta and not a suffix");
    if (k_pp < 0) throw InvalidInputError("distribute_sparsity: negative sparsity");
    if (k_pp == 0) return {0, 0, s, e};
    const Index left_cap = s <= 1 ? 0 : (s - 2) / delta + 1;
    const Index right_cap = e >= d ? 0 : (d - e - 1) / delta + 1;
    if (k_pp > left_cap + right_cap)
        throw InfeasibleError("distribute_sparsity: budget does not fit outside the window");

    WideInt cmax = 0;
    for (const WideInt& v : c)
        if (v > cmax) cmax = v;
    const WideInt shift = 1 + (k_pp * cmax + 1);
    std::vector<WideInt> banned = detail::masked_costs(c, s, e, shift);
    DualSolution w1 = opt_value_of_dual(banned, delta, k_pp, WideInt(-(k_pp - 1) * cmax + shift),
                                        WideInt(cmax + shift));
    ActiveSet a1 = active_constraints(banned, delta, w1);
    DualSolution w2 = dual_greedy(banned, delta, w1.w0 + 1, k_pp);
    ActiveSet a2 = active_constraints(banned, delta, w2);

    auto count_left = [&](const ActiveSet& a) {
        return static_cast<Index>(std::count_if(a.indices.begin(), a.indices.end(),
                                                [&](Index i) { return i < s; }));
    };
    auto count_right = [&](const ActiveSet& a) {
        return static_cast<Index>(std::count_if(a.indices.begin(), a.indices.end(),
                                                [&](Index i) { return i > e; }));
    };
    const Index k1_l = count_left(a1);
    const Index k2_l = count_left(a2);
    const Index k2_r = count_right(a2);
    assert(k1_l >= k2_l);
    assert(k_pp - k2_l - k2_r >= 0);
    const Index k_left = k2_l + std::min(k1_l - k2_l, k_pp - k2_l - k2_r);
    return {k_left, k_pp - k_left, s, e};
}

/// Optional instrumentation for recover: recursion shape and workload.
struct RecoverStats {
    Index max_depth = 0;
    long long nodes = 0;
};

namespace detail {

inline void recover_rec(std::span<const WideInt> c, Index delta, Index k, Index offset,
                        std::vector<Index>& out, Index depth, RecoverStats* stats) {
    if (k == 0) return;
    const Index d = static_cast<Index>(c.size());
    assert(d >= 1 && "recover: non-empty slice required when k > 0");
    if (stats) {
        ++stats->nodes;
        stats->max_depth = std::max(stats->max_depth, depth);
    }
    const Index j_s = (d + 1) / 2;
    const Index r = delta_recovery(c, delta, k, j_s);
    Index s, e, k_pp;
    if (r == -1) {
        s = j_s;
        e = std::min(s + delta - 1, d);
        k_pp = k;
    } else {
        s = std::max<Index>(r - delta + 1, 1);
        e = std::min(r + delta - 1, d);
        k_pp = k - 1;
    }
    const SparsitySplit split = distribute_sparsity(c, delta, k_pp, s, e);
    assert(split.k_left + split.k_right + (r != -1 ? 1 : 0) == k);
    assert(feasible_params(s - 1, split.k_left, delta));
    assert(feasible_params(d - e, split.k_right, delta));
    recover_rec(c.subspan(0, static_cast<std::size_t>(s - 1)), delta, split.k_left, offset, out,
                depth + 1, stats);
    if (r != -1) out.push_back(offset + r);
    recover_rec(c.subspan(static_cast<std::size_t>(e)), delta, split.k_right, offset + e, out,
                depth + 1, stats);
}

}  // namespace detail

/// Deterministic divide-and-conquer solver: pin down one index in the middle
/// Delta-window (or certify the window unused), split the sparsity budget
/// across the two sides, and recurse. Each side has at most ceil(d/2)
/// coefficients, so the recursion depth is logarithmic.
inline std::pair<Support, WideInt> recover(std::span<const WideInt> c, Index delta, Index k,
                                           RecoverStats* stats = nullptr) {
    const Index d = static_cast<Index>(c.size());
    if (!feasible_params(d, k, delta)) throw InfeasibleError("recover: infeasible (d, k, delta)");
    Support s;
    if (k > 0) detail::recover_rec(c, delta, k, 0, s.indices, 1, stats);
    assert(std::is_sorted(s.indices.begin(), s.indices.end()));
    WideInt value = 0;
    for (Index i : s.indices) value += c[static_cast<std::size_t>(i - 1)];
    return {std::move(s), std::move(value)};
}

inline std::pair<Support, WideInt> recover(const ProjectionInstance& inst,
                                           RecoverStats* stats = nullptr) {
    return recover(inst.costs, inst.delta, inst.k, stats);
}

}  // namespace sepsparse
