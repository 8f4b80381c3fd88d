#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <random>
#include <string>

namespace sepsparse {

// Exact signed integer used for all cost arithmetic. Arbitrary precision,
// so sums like d^4 * c + X never wrap. Values up to ~128 bits stay in the
// inline buffer and avoid heap traffic.
using WideInt = boost::multiprecision::cpp_int;

using Index = std::int64_t;

#if defined(__SIZEOF_INT128__)
#define SEPSPARSE_HAS_INT128 1
using Int128 = __int128;
inline constexpr Int128 int128_max() {
    return static_cast<Int128>((static_cast<unsigned __int128>(1) << 127) - 1);
}
#else
#define SEPSPARSE_HAS_INT128 0
#endif

inline WideInt pow_wide(const WideInt& base, unsigned exp) {
    return boost::multiprecision::pow(base, exp);
}

/// Binomial coefficient C(n, k); 0 when n < k or either side is negative.
inline WideInt binomial(Index n, Index k) {
    if (k < 0 || n < 0 || n < k) return 0;
    if (k > n - k) k = n - k;
    WideInt r = 1;
    for (Index i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

/// Uniform draw from {0, ..., bound - 1} without rejection: 128 random bits
/// are mapped down by a multiply-shift. The residual bias is at most
/// bound / 2^128, far below anything observable.
inline WideInt uniform_below(std::mt19937_64& rng, const WideInt& bound) {
    WideInt u = WideInt(rng());
    u <<= 64;
    u |= WideInt(rng());
    return (u * bound) >> 128;
}

}  // namespace sepsparse
