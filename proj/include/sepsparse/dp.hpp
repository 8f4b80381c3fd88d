#pragma once

#include <cassert>
#include <span>
#include <utility>
#include <vector>

#include "sepsparse/core.hpp"

namespace sepsparse {

namespace detail {

// Predecessor bits packed per DP cell; enough to backtrack in O(d + k).
class BitTable {
  public:
    BitTable(std::size_t rows, std::size_t cols)
        : cols_(cols), bits_((rows * cols + 63) / 64, 0) {}

    void set(std::size_t r, std::size_t c) {
        const std::size_t ix = r * cols_ + c;
        bits_[ix >> 6] |= std::uint64_t(1) << (ix & 63);
    }
    bool get(std::size_t r, std::size_t c) const {
        const std::size_t ix = r * cols_ + c;
        return (bits_[ix >> 6] >> (ix & 63)) & 1;
    }

  private:
    std::size_t cols_;
    std::vector<std::uint64_t> bits_;
};

}  // namespace detail

/// Folklore O(d*k) dynamic program:
///   DP[i][j] = max{ DP[i-1][j], c_i + DP[i-Delta][j-1] },
/// filled with two rolling rows indexed by j. Negative table values encode
/// minus infinity (real entries are sums of non-negative costs). Ties break
/// toward not taking c_i.
inline std::pair<Support, WideInt> dp_folklore(std::span<const WideInt> c, Index delta, Index k) {
    const Index d = static_cast<Index>(c.size());
    if (!feasible_params(d, k, delta)) throw InfeasibleError("dp_folklore: infeasible (d, k, delta)");
    Support s;
    if (k == 0) return {s, WideInt(0)};

    std::vector<WideInt> prev(static_cast<std::size_t>(d) + 1, WideInt(0));  // row j-1
    std::vector<WideInt> cur(static_cast<std::size_t>(d) + 1);               // row j
    detail::BitTable take(static_cast<std::size_t>(d), static_cast<std::size_t>(k));
    for (Index j = 1; j <= k; ++j) {
        cur[0] = -1;
        for (Index i = 1; i <= d; ++i) {
            const WideInt& skip = cur[static_cast<std::size_t>(i - 1)];
            bool take_ok;
            WideInt take_val;
            if (i - delta >= 0) {
                const WideInt& below = prev[static_cast<std::size_t>(i - delta)];
                take_ok = below >= 0;
                if (take_ok) take_val = c[static_cast<std::size_t>(i - 1)] + below;
            } else {
                take_ok = (j == 1);
                if (take_ok) take_val = c[static_cast<std::size_t>(i - 1)];
            }
            if (take_ok && take_val > skip) {
                cur[static_cast<std::size_t>(i)] = std::move(take_val);
                take.set(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1));
            } else {
                cur[static_cast<std::size_t>(i)] = skip;
            }
        }
        std::swap(prev, cur);
    }
    WideInt value = prev[static_cast<std::size_t>(d)];
    assert(value >= 0);

    Index i = d, j = k;
    while (j >= 1) {
        assert(i >= 1);
        if (take.get(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1))) {
            s.indices.push_back(i);
            i -= delta;
            --j;
        } else {
            --i;
        }
    }
    std::reverse(s.indices.begin(), s.indices.end());
    return {std::move(s), std::move(value)};
}

/// Slack-indexed dynamic program over (k+1) x (s+1) states, where
/// s = d - ((k-1)*Delta + 1) is the spacing not mandated by the model:
///   DPbar[i][j] = max{ DPbar[i-1][j], c_{pos(i,j)} + DPbar[i][j-1] },
///   pos(i, j)   = d - (s - i) - (k - j) * Delta.
/// Runs in O(k*s + d); for tight instances (s = 0) that is O(d + k).
inline std::pair<Support, WideInt> dp_improved(std::span<const WideInt> c, Index delta, Index k) {
    const Index d = static_cast<Index>(c.size());
    if (!feasible_params(d, k, delta)) throw InfeasibleError("dp_improved: infeasible (d, k, delta)");
    Support s_out;
    if (k == 0) return {s_out, WideInt(0)};
    const Index s = d - ((k - 1) * delta + 1);
    assert(s >= 0);
    auto pos = [&](Index i, Index j) { return d - (s - i) - (k - j) * delta; };

    std::vector<WideInt> prev(static_cast<std::size_t>(s) + 1, WideInt(0));  // column j-1
    std::vector<WideInt> cur(static_cast<std::size_t>(s) + 1);               // column j
    detail::BitTable take(static_cast<std::size_t>(k), static_cast<std::size_t>(s) + 1);
    [[maybe_unused]] long long touched = s + 1;  // the j = 0 base column
    for (Index j = 1; j <= k; ++j) {
        for (Index i = 0; i <= s; ++i) {
            ++touched;
            WideInt take_val = c[static_cast<std::size_t>(pos(i, j) - 1)] + prev[static_cast<std::size_t>(i)];
            if (i == 0 || take_val > cur[static_cast<std::size_t>(i - 1)]) {
                cur[static_cast<std::size_t>(i)] = std::move(take_val);
                take.set(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(i));
            } else {
                cur[static_cast<std::size_t>(i)] = cur[static_cast<std::size_t>(i - 1)];
            }
        }
        std::swap(prev, cur);
    }
    assert(touched == static_cast<long long>(k + 1) * (s + 1));
    WideInt value = prev[static_cast<std::size_t>(s)];

    Index i = s, j = k;
    while (j >= 1) {
        assert(i >= 0);
        if (take.get(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(i))) {
            s_out.indices.push_back(pos(i, j));
            --j;
        } else {
            --i;
        }
    }
    std::reverse(s_out.indices.begin(), s_out.indices.end());
    return {std::move(s_out), std::move(value)};
}

}  // namespace sepsparse
