#pragma once

#include <algorithm>
#include <cassert>
#include <span>
#include <utility>
#include <vector>

#include "sepsparse/core.hpp"

namespace sepsparse {

/// Nearly-linear 2-approximation head projection. Partition [d] into
/// ceil(d/Delta) blocks of length Delta, keep each block's argmax, split the
/// winners by block parity, and return the better of the two parity classes
/// truncated to its k largest costs.
///
/// The output is always Delta-separated (same-parity blocks start 2*Delta
/// apart) and achieves at least half the optimum, but it may contain fewer
/// than k indices; that shortfall is the reason an exact projection is
/// needed at all.
inline std::pair<Support, WideInt> head_approx_2(std::span<const WideInt> c, Index delta,
                                                 Index k) {
    const Index d = static_cast<Index>(c.size());
    if (k < 1) throw InvalidInputError("head_approx_2: k must be >= 1");
    if (delta < 1) throw InvalidInputError("head_approx_2: delta must be >= 1");
    std::vector<Index> odd_winners, even_winners;
    for (Index block = 1; (block - 1) * delta + 1 <= d; ++block) {
        const Index lo = (block - 1) * delta + 1;
        const Index hi = std::min(block * delta, d);
        Index arg = lo;
        for (Index i = lo + 1; i <= hi; ++i)
            if (c[static_cast<std::size_t>(i - 1)] > c[static_cast<std::size_t>(arg - 1)]) arg = i;
        (block % 2 == 1 ? odd_winners : even_winners).push_back(arg);
    }
    auto top_k = [&](std::vector<Index>& winners) {
        std::sort(winners.begin(), winners.end(), [&](Index a, Index b) {
            const WideInt& ca = c[static_cast<std::size_t>(a - 1)];
            const WideInt& cb = c[static_cast<std::size_t>(b - 1)];
            if (ca != cb) return ca > cb;
            return a < b;
        });
        if (static_cast<Index>(winners.size()) > k) winners.resize(static_cast<std::size_t>(k));
        WideInt total = 0;
        for (Index i : winners) total += c[static_cast<std::size_t>(i - 1)];
        return total;
    };
    WideInt odd_total = top_k(odd_winners);
    WideInt even_total = top_k(even_winners);
    Support s;
    WideInt value;
    if (odd_total >= even_total) {
        s.indices = std::move(odd_winners);
        value = std::move(odd_total);
    } else {
        s.indices = std::move(even_winners);
        value = std::move(even_total);
    }
    std::sort(s.indices.begin(), s.indices.end());
    assert(s.separated_by(delta));
    return {std::move(s), std::move(value)};
}

}  // namespace sepsparse
