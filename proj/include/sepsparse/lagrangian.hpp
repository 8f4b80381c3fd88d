#pragma once

#include <algorithm>
#include <cassert>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "sepsparse/core.hpp"
#include "sepsparse/dual.hpp"

namespace sepsparse {

/// Lagrangian relaxation query: maximize sum_{i in S} (c_i - lambda) over
/// S in M_Delta, with lambda = lambda_num / lambda_den held as an exact
/// rational so shifted queries like lambda - 1/(d+1) stay in integers.
struct LagrangianQuery {
    std::vector<WideInt> costs;
    Index delta = 1;
    WideInt lambda_num = 0;
    WideInt lambda_den = 1;

    LagrangianQuery(std::vector<WideInt> c, Index sep, WideInt num, WideInt den = 1)
        : costs(std::move(c)), delta(sep), lambda_num(std::move(num)), lambda_den(std::move(den)) {
        if (delta < 1) throw InvalidInputError("LagrangianQuery: delta must be >= 1");
        if (lambda_den < 1) throw InvalidInputError("LagrangianQuery: lambda_den must be >= 1");
    }
};

enum class TieBreak {
    PreferSkip,  // strict improvement required to select an index (default)
    PreferTake,  // select on ties
};

/// Solve the relaxation by the one-pass recurrence
///   s_{i+1} = max{ s_i, s_{i+1-Delta} + (c_{i+1} - lambda) }
/// on the den-scaled integer costs. Returns the selected support and the
/// achieved value of den * sum_{i in S} (c_i - lambda).
inline std::pair<Support, WideInt> proj_lagr(const LagrangianQuery& q,
                                             TieBreak tie = TieBreak::PreferSkip) {
    const Index d = static_cast<Index>(q.costs.size());
    const Index delta = q.delta;
    std::vector<WideInt> best(static_cast<std::size_t>(d));
    std::vector<Index> pick(static_cast<std::size_t>(d));
    auto adjusted = [&](Index i) {  // den * (c_i - lambda), 1-based i
        return q.lambda_den * q.costs[static_cast<std::size_t>(i - 1)] - q.lambda_num;
    };
    auto better = [&](const WideInt& take, const WideInt& skip) {
        return tie == TieBreak::PreferTake ? take >= skip : take > skip;
    };
    Support s;
    if (d == 0) return {s, WideInt(0)};
    {
        WideInt a1 = adjusted(1);
        if (better(a1, WideInt(0))) {
            best[0] = a1;
            pick[0] = 1;
        } else {
            best[0] = 0;
            pick[0] = -1;
        }
    }
    for (Index i = 2; i <= std::min(delta, d); ++i) {
        WideInt ai = adjusted(i);
        if (better(ai, best[static_cast<std::size_t>(i - 2)])) {
            best[static_cast<std::size_t>(i - 1)] = ai;
            pick[static_cast<std::size_t>(i - 1)] = i;
        } else {
            best[static_cast<std::size_t>(i - 1)] = best[static_cast<std::size_t>(i - 2)];
            pick[static_cast<std::size_t>(i - 1)] = pick[static_cast<std::size_t>(i - 2)];
        }
    }
    for (Index i = delta + 1; i <= d; ++i) {
        WideInt take = adjusted(i) + best[static_cast<std::size_t>(i - delta - 1)];
        if (better(take, best[static_cast<std::size_t>(i - 2)])) {
            best[static_cast<std::size_t>(i - 1)] = std::move(take);
            pick[static_cast<std::size_t>(i - 1)] = i;
        } else {
            best[static_cast<std::size_t>(i - 1)] = best[static_cast<std::size_t>(i - 2)];
            pick[static_cast<std::size_t>(i - 1)] = pick[static_cast<std::size_t>(i - 2)];
        }
    }
    for (Index i = d; i >= 1; i = pick[static_cast<std::size_t>(i - 1)] - delta) {
        const Index p = pick[static_cast<std::size_t>(i - 1)];
        if (p < 1) break;
        s.indices.push_back(p);
    }
    std::reverse(s.indices.begin(), s.indices.end());
    return {std::move(s), best[static_cast<std::size_t>(d - 1)]};
}

/// Integer-lambda convenience wrapper.
inline std::pair<Support, WideInt> proj_lagr(std::span<const WideInt> costs, Index delta,
                                             const WideInt& lambda,
                                             TieBreak tie = TieBreak::PreferSkip) {
    return proj_lagr(LagrangianQuery(std::vector<WideInt>(costs.begin(), costs.end()), delta,
                                     lambda, WideInt(1)),
                     tie);
}

/// Randomly perturbed copy of an instance: X_i uniform in {0, ..., d^3 - 1}
/// and tilde_c = d^4 * c + X. The perturbation is large enough to break ties
/// in the relaxation yet too small to change which supports are optimal.
struct PerturbedInstance {
    ProjectionInstance base;
    std::vector<WideInt> x;
    std::vector<WideInt> tilde_c;
    std::uint64_t seed = 0;
};

inline PerturbedInstance perturb(const ProjectionInstance& inst, std::uint64_t seed) {
    PerturbedInstance p;
    p.base = inst;
    p.seed = seed;
    std::mt19937_64 rng(seed);
    const WideInt d3 = pow_wide(WideInt(inst.d), 3);
    const WideInt d4 = pow_wide(WideInt(inst.d), 4);
    p.x.resize(static_cast<std::size_t>(inst.d));
    p.tilde_c.resize(static_cast<std::size_t>(inst.d));
    for (Index i = 0; i < inst.d; ++i) {
        p.x[static_cast<std::size_t>(i)] = uniform_below(rng, d3);
        p.tilde_c[static_cast<std::size_t>(i)] =
            d4 * inst.costs[static_cast<std::size_t>(i)] + p.x[static_cast<std::size_t>(i)];
    }
    return p;
}

struct LasspResult {
    Support support;
    WideInt value;   // objective on the original (unperturbed) costs
    int iterations;  // completed loop iterations
};

inline Index default_lassp_iteration_cap(Index d) {
    Index log2d = 0;
    while ((Index(1) << log2d) < d) ++log2d;
    return 64 * std::max<Index>(1, log2d);
}

/// Las Vegas solver for the separated sparsity projection.
///
/// Each round perturbs the costs, locates the largest integer minimizer
/// lambda-hat of the relaxation value via the dual, then queries the
/// relaxation at lambda-hat - 1/(d+1) (exactly, through (d+1)-scaling).
/// The round succeeds when the returned support has exactly k indices, which
/// happens in the first round with probability at least 1 - 1/d. A successful
/// support is an exact optimum for the original costs.
inline LasspResult lassp(const ProjectionInstance& inst, std::mt19937_64& rng,
                         Index max_iterations = -1) {
    if (!inst.feasible()) throw InfeasibleError("lassp: infeasible (d, k, delta)");
    if (inst.k == 0) return {Support{}, WideInt(0), 0};
    if (max_iterations < 0) max_iterations = default_lassp_iteration_cap(inst.d);
    const WideInt den = inst.d + 1;
    for (Index iter = 1; iter <= max_iterations; ++iter) {
        PerturbedInstance p = perturb(inst, rng());
        WideInt lambda_hat = max_integer_minimizer_lambda(p.tilde_c, inst.delta, inst.k);
        LagrangianQuery query(p.tilde_c, inst.delta, den * lambda_hat - 1, den);
        auto [support, num] = proj_lagr(query);
        if (support.size() == inst.k) {
            WideInt value = inst.value_of(support);
            return {std::move(support), std::move(value), static_cast<int>(iter)};
        }
    }
    throw IterationLimitError("lassp: iteration cap exceeded; this indicates a bug");
}

/// Optimal projection objective without a support, via val(D) on the
/// unperturbed costs.
inline WideInt lassp_value_only(const ProjectionInstance& inst) {
    if (!inst.feasible()) throw InfeasibleError("lassp_value_only: infeasible (d, k, delta)");
    if (inst.k == 0) return 0;
    return opt_value_of_dual(inst.costs, inst.delta, inst.k).objective;
}

}  // namespace sepsparse
