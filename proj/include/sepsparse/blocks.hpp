#pragma once

#include <random>
#include <span>
#include <utility>
#include <vector>

#include "sepsparse/core.hpp"
#include "sepsparse/deterministic.hpp"
#include "sepsparse/dp.hpp"
#include "sepsparse/lagrangian.hpp"

namespace sepsparse {

enum class BlockEngine {
    Recover,     // deterministic; default so results are run-to-run identical
    Lassp,
    DpImproved,
};

/// Project onto the (Delta, b)-block model: k blocks of b consecutive
/// indices, block starts pairwise at least Delta + b - 1 apart. Reduces to a
/// plain (Delta + b - 1)-separated projection of the sliding-window sums
///   c^b_i = c_i + ... + c_{i+b-1},
/// computed incrementally in O(d). Returns the chosen block starts and the
/// total covered cost.
inline std::pair<Support, WideInt> project_blocks(std::span<const WideInt> c, Index delta,
                                                  Index b, Index k,
                                                  BlockEngine engine = BlockEngine::Recover,
                                                  std::mt19937_64* rng = nullptr) {
    const Index d = static_cast<Index>(c.size());
    if (b < 1) throw InvalidInputError("project_blocks: b must be >= 1");
    if (delta < 1) throw InvalidInputError("project_blocks: delta must be >= 1");
    if (k == 0) return {Support{}, WideInt(0)};
    const Index sep = delta + b - 1;
    const Index m = d - b + 1;
    if (m < 1 || !feasible_params(m, k, sep))
        throw InfeasibleError("project_blocks: infeasible (d, k, delta, b)");

    std::vector<WideInt> window(static_cast<std::size_t>(m));
    WideInt run = 0;
    for (Index i = 0; i < b; ++i) run += c[static_cast<std::size_t>(i)];
    window[0] = run;
    for (Index i = 1; i < m; ++i) {
        run += c[static_cast<std::size_t>(i + b - 1)];
        run -= c[static_cast<std::size_t>(i - 1)];
        window[static_cast<std::size_t>(i)] = run;
    }

    switch (engine) {
        case BlockEngine::Recover:
            return recover(window, sep, k);
        case BlockEngine::DpImproved:
            return dp_improved(window, sep, k);
        case BlockEngine::Lassp: {
            std::mt19937_64 local(0x5eb5ca7e);
            ProjectionInstance inst(window, k, sep);
            LasspResult r = lassp(inst, rng ? *rng : local);
            return {std::move(r.support), std::move(r.value)};
        }
    }
    throw InvalidInputError("project_blocks: unknown engine");
}

}  // namespace sepsparse
