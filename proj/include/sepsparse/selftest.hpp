#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sepsparse/approx.hpp"
#include "sepsparse/blocks.hpp"
#include "sepsparse/core.hpp"
#include "sepsparse/deterministic.hpp"
#include "sepsparse/dp.hpp"
#include "sepsparse/dual.hpp"
#include "sepsparse/lagrangian.hpp"

namespace sepsparse {

struct SelftestOptions {
    Index max_d = 12;
    Index max_delta = 4;
    int trials = 200;  // random cost vectors per (d, k, delta) shape
    std::uint64_t seed = 1;
    int cost_max = 15;
};

struct SelftestReport {
    long long shapes = 0;
    long long instances = 0;
    long long checks = 0;
    long long failures = 0;
    std::string first_failure;  // serialized counterexample, for replay

    bool passed() const { return failures == 0; }
};

namespace detail {

inline std::string serialize_instance(std::span<const WideInt> c, Index k, Index delta,
                                      const std::string& what) {
    std::ostringstream os;
    os << "{\"check\":\"" << what << "\",\"k\":" << k << ",\"delta\":" << delta << ",\"costs\":[";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) os << ",";
        os << c[i];
    }
    os << "]}";
    return os.str();
}

class SelftestRun {
  public:
    explicit SelftestRun(const SelftestOptions& opt) : opt_(opt) {}

    SelftestReport run() {
        for (Index d = 1; d <= opt_.max_d; ++d) {
            for (Index delta = 1; delta <= opt_.max_delta; ++delta) {
                const Index k_max = (d - 1) / delta + 1;
                for (Index k = 0; k <= k_max; ++k) {
                    ++report_.shapes;
                    check_shape(d, k, delta);
                    std::mt19937_64 rng(hash_shape(d, k, delta));
                    check_instance(fixed_costs(d), k, delta, rng);
                    std::uniform_int_distribution<int> cost(0, opt_.cost_max);
                    for (int t = 0; t < opt_.trials; ++t) {
                        std::vector<WideInt> c(static_cast<std::size_t>(d));
                        for (auto& v : c) v = cost(rng);
                        check_instance(c, k, delta, rng);
                    }
                }
            }
        }
        return report_;
    }

  private:
    std::uint64_t hash_shape(Index d, Index k, Index delta) const {
        std::uint64_t h = opt_.seed;
        for (std::uint64_t v : {std::uint64_t(d), std::uint64_t(k), std::uint64_t(delta)}) {
            h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }

    std::vector<WideInt> fixed_costs(Index d) const {
        std::vector<WideInt> c(static_cast<std::size_t>(d));
        for (Index i = 0; i < d; ++i)
            c[static_cast<std::size_t>(i)] = (7 * i + 3) % (opt_.cost_max + 1);
        return c;
    }

    void expect(bool ok, std::span<const WideInt> c, Index k, Index delta, const char* what) {
        ++report_.checks;
        if (!ok) {
            ++report_.failures;
            if (report_.first_failure.empty())
                report_.first_failure = serialize_instance(c, k, delta, what);
        }
    }

    // Shape-level invariant: the enumeration and the counting formula agree.
    void check_shape(Index d, Index k, Index delta) {
        long long n = 0;
        enumerate_supports(d, k, delta, [&](std::span<const Index>) { ++n; });
        std::vector<WideInt> empty;
        expect(WideInt(n) == count_supports(d, k, delta, 1), empty, k, delta,
               "enumeration count == count_supports");
    }

    void check_instance(const std::vector<WideInt>& c, Index k, Index delta,
                        std::mt19937_64& rng) {
        ++report_.instances;
        ProjectionInstance inst(c, k, delta);
        auto [s_star, v_star] = brute_force_project(inst);
        expect(s_star.in_model(k, delta), c, k, delta, "oracle support in model");

        LasspResult lr = lassp(inst, rng);
        expect(lr.support.in_model(k, delta), c, k, delta, "lassp support in model");
        expect(lr.value == v_star, c, k, delta, "lassp value == oracle value");
        expect(inst.value_of(lr.support) == v_star, c, k, delta, "lassp support achieves value");

        auto [s_rec, v_rec] = recover(c, delta, k);
        expect(s_rec.in_model(k, delta), c, k, delta, "recover support in model");
        expect(v_rec == v_star, c, k, delta, "recover value == oracle value");

        auto [s_dp, v_dp] = dp_folklore(c, delta, k);
        expect(s_dp.in_model(k, delta), c, k, delta, "dp_folklore support in model");
        expect(v_dp == v_star, c, k, delta, "dp_folklore value == oracle value");

        auto [s_dpf, v_dpf] = dp_improved(c, delta, k);
        expect(s_dpf.in_model(k, delta), c, k, delta, "dp_improved support in model");
        expect(v_dpf == v_star, c, k, delta, "dp_improved value == oracle value");

        expect(opt_value_of_dual(c, delta, k).objective == v_star, c, k, delta,
               "opt_value_of_dual == oracle value (strong duality)");
        expect(lassp_value_only(inst) == v_star, c, k, delta, "lassp_value_only == oracle value");

        if (k >= 1) {
            auto [s_apx, v_apx] = head_approx_2(c, delta, k);
            expect(s_apx.separated_by(delta), c, k, delta, "head_approx_2 separated");
            expect(s_apx.size() <= k, c, k, delta, "head_approx_2 size <= k");
            expect(2 * v_apx >= v_star, c, k, delta, "head_approx_2 2-approximation");
            expect(inst.value_of(s_apx) == v_apx, c, k, delta, "head_approx_2 value consistent");
        }

        check_dual_properties(c, k, delta);
        check_blocks(c, k, delta);
    }

    void check_dual_properties(const std::vector<WideInt>& c, Index k, Index delta) {
        const Index d = static_cast<Index>(c.size());
        WideInt cmax = 0;
        for (const WideInt& v : c)
            if (v > cmax) cmax = v;
        // Greedy output must satisfy every dual constraint.
        for (WideInt lambda : {WideInt(-1), WideInt(0), cmax}) {
            DualSolution sol = dual_greedy(c, delta, lambda, k);
            bool ok = true;
            for (Index i = 1; i <= d && ok; ++i) {
                WideInt cover = sol.w0;
                for (Index j = std::max<Index>(1, i - delta + 1); j <= i; ++j)
                    cover += sol.w[static_cast<std::size_t>(j - 1)];
                ok = cover >= c[static_cast<std::size_t>(i - 1)];
            }
            expect(ok, c, k, delta, "dual_greedy feasibility");
        }
        // Optimality certificate at the computed optimum.
        DualSolution best = opt_value_of_dual(c, delta, k);
        const Index n1 = active_constraints(c, delta, best).size();
        const Index n2 =
            active_constraints(c, delta, dual_greedy(c, delta, best.w0 + 1, k)).size();
        expect(n1 >= k && k >= n2, c, k, delta, "active-count optimality certificate");
    }

    void check_blocks(const std::vector<WideInt>& c, Index k, Index delta) {
        const Index d = static_cast<Index>(c.size());
        if (d > 12 || delta > 3 || k > 3) return;
        for (Index b = 1; b <= 2; ++b) {
            const Index m = d - b + 1;
            if (!feasible_params(m, k, delta + b - 1)) continue;
            auto window_value = [&](std::span<const Index> starts) {
                WideInt total = 0;
                for (Index p : starts)
                    for (Index j = 0; j < b; ++j) total += c[static_cast<std::size_t>(p + j - 1)];
                return total;
            };
            WideInt best = -1;
            enumerate_supports(m, k, delta + b - 1, [&](std::span<const Index> starts) {
                WideInt v = window_value(starts);
                if (v > best) best = v;
            });
            auto [starts, v] = project_blocks(c, delta, b, k);
            expect(v == best, c, k, delta, "project_blocks == block-aware brute force");
            expect(starts.separated_by(delta + b - 1), c, k, delta, "block starts separated");
            expect(window_value(starts.indices) == v, c, k, delta, "block value consistent");
        }
    }

    SelftestOptions opt_;
    SelftestReport report_;
};

}  // namespace detail

/// Exhaustive oracle-equivalence and invariant suite over all feasible
/// shapes with d <= max_d and delta <= max_delta; used by the CLI selftest
/// command. With trials = 0 only the per-shape fixed instances run.
inline SelftestReport run_selftest(const SelftestOptions& opt = {}) {
    if (opt.max_d > 24) throw InvalidInputError("selftest: max_d capped at 24 (oracle enumeration)");
    if (opt.max_d < 1 || opt.max_delta < 1 || opt.trials < 0)
        throw InvalidInputError("selftest: bad options");
    detail::SelftestRun run(opt);
    return run.run();
}

}  // namespace sepsparse
