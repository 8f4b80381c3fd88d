// Test-side oracles, deliberately independent of the library's solver paths:
// plain bitmask enumeration over all Delta-separated subsets.

#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "sepsparse/core.hpp"

namespace test_oracles {

using sepsparse::Index;
using sepsparse::WideInt;

// All subsets of [d] (any size) whose members are pairwise >= delta apart.
inline bool mask_separated(std::uint32_t mask, Index d, Index delta) {
    Index last = -delta;  // sentinel far left
    for (Index i = 0; i < d; ++i) {
        if (mask & (1u << i)) {
            if (last >= 0 && i - last < delta) return false;
            last = i;
        }
    }
    return true;
}

struct RelaxationOptimum {
    WideInt best;                                 // max of den * sum (c_i - lambda) over M_Delta
    std::vector<std::vector<Index>> maximizers;  // all optimal supports (1-based)
};

// Exhaustive optimum of the Lagrangian relaxation objective
//   den * sum_{i in S} c_i - |S| * num      over all S in M_Delta,
// matching proj_lagr's scaled-value convention. Requires d <= 20.
inline RelaxationOptimum relaxation_brute(const std::vector<WideInt>& c, Index delta,
                                          const WideInt& num, const WideInt& den) {
    const Index d = static_cast<Index>(c.size());
    RelaxationOptimum out;
    out.best = 0;  // the empty support
    out.maximizers.push_back({});
    for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
        if (!mask_separated(mask, d, delta)) continue;
        WideInt v = 0;
        std::vector<Index> s;
        for (Index i = 0; i < d; ++i) {
            if (mask & (1u << i)) {
                v += den * c[static_cast<std::size_t>(i)] - num;
                s.push_back(i + 1);
            }
        }
        if (v > out.best) {
            out.best = v;
            out.maximizers.clear();
            out.maximizers.push_back(std::move(s));
        } else if (v == out.best) {
            out.maximizers.push_back(std::move(s));
        }
    }
    return out;
}

// Best k-block selection by direct enumeration of start positions with
// pairwise start distance >= delta + b - 1; sums are recomputed from c.
inline WideInt block_brute(const std::vector<WideInt>& c, Index delta, Index b, Index k) {
    const Index d = static_cast<Index>(c.size());
    const Index m = d - b + 1;
    WideInt best = -1;
    sepsparse::enumerate_supports(m, k, delta + b - 1, [&](std::span<const Index> starts) {
        WideInt v = 0;
        for (Index p : starts)
            for (Index j = 0; j < b; ++j) v += c[static_cast<std::size_t>(p + j - 1)];
        if (v > best) best = v;
    });
    return best;
}

// Best k-sparse value restricted to supports avoiding [lo, hi] (1-based).
inline WideInt brute_avoiding_window(const std::vector<WideInt>& c, Index delta, Index k,
                                     Index lo, Index hi) {
    const Index d = static_cast<Index>(c.size());
    WideInt best = -1;
    sepsparse::enumerate_supports(d, k, delta, [&](std::span<const Index> s) {
        WideInt v = 0;
        for (Index i : s) {
            if (i >= lo && i <= hi) return;
            v += c[static_cast<std::size_t>(i - 1)];
        }
        if (v > best) best = v;
    });
    return best;
}

inline std::vector<WideInt> random_costs(std::mt19937_64& rng, Index d, int cost_max) {
    std::uniform_int_distribution<int> dist(0, cost_max);
    std::vector<WideInt> c(static_cast<std::size_t>(d));
    for (auto& v : c) v = dist(rng);
    return c;
}

}  // namespace test_oracles
