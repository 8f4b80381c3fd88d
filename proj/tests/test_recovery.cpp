#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sepsparse/recovery.hpp"

using namespace sepsparse;

TEST_CASE("recovery_error basics", "[recovery]") {
    std::vector<double> a{1, 2, 3};
    CHECK(recovery_error(a, a) == 0.0);
    std::vector<double> zero{0, 0, 0};
    CHECK(recovery_error(zero, a) == Catch::Approx(std::sqrt(14.0)));
    std::vector<double> p{3, 0};
    std::vector<double> q{0, -4};
    CHECK(recovery_error(p, q) == Catch::Approx(5.0));
    std::vector<double> short_vec{1};
    CHECK_THROWS_AS(recovery_error(a, short_vec), InvalidInputError);
}

TEST_CASE("generator parameter derivation", "[recovery]") {
    GeneratorParams p;
    p.d = 1000;
    p.alpha = 50;
    p.beta = 5;
    auto [k, delta] = derived_sparsity(p);
    CHECK(k == 20);
    CHECK(delta == 43);  // (1000 - 5*21)/20 - 1 = 43.75, floored

    GeneratorParams bad;
    bad.d = 100;
    bad.alpha = 200;  // k = 0
    CHECK_THROWS_AS(derived_sparsity(bad), InvalidParamsError);
}

TEST_CASE("generate_signal", "[recovery]") {
    SECTION("noiseless signal has exactly k spikes of magnitude 1") {
        GeneratedSignal g = generate_signal(200, 5, 20, 0.0, 42);
        Index nonzeros = 0;
        for (double v : g.signal) {
            if (v != 0.0) {
                ++nonzeros;
                CHECK(std::fabs(v) == 1.0);
            }
        }
        CHECK(nonzeros == 5);
        CHECK(g.support.in_model(5, 20));
    }
    SECTION("fixed seed reproduces the signal bit for bit") {
        GeneratedSignal a = generate_signal(128, 4, 10, 0.1, 7);
        GeneratedSignal b = generate_signal(128, 4, 10, 0.1, 7);
        CHECK(a.signal == b.signal);
        CHECK(a.support.indices == b.support.indices);
        GeneratedSignal c = generate_signal(128, 4, 10, 0.1, 8);
        CHECK(a.signal != c.signal);
    }
    SECTION("infeasible parameters throw") {
        CHECK_THROWS_AS(generate_signal(10, 4, 4, 0.0, 1), InvalidParamsError);
    }
}

TEST_CASE("noiseless fully-determined recovery is exact", "[recovery]") {
    RecoveryProblem prob = generate_problem(64, 3, 10, 64, 0.0, 11);
    SECTION("separated projector") {
        CosampResult res = cosamp(prob, make_separated_projector(10, SeparatedEngine::Lassp));
        CHECK(recovery_error(res.theta_hat, prob.theta_star) < 1e-8);
    }
    SECTION("deterministic projector engine") {
        CosampResult res = cosamp(prob, make_separated_projector(10, SeparatedEngine::Recover));
        CHECK(recovery_error(res.theta_hat, prob.theta_star) < 1e-8);
    }
    SECTION("hard thresholding") {
        CosampResult res = cosamp(prob, make_hard_threshold_projector());
        CHECK(recovery_error(res.theta_hat, prob.theta_star) < 1e-8);
    }
}

TEST_CASE("zero signal recovers to zero", "[recovery]") {
    RecoveryProblem prob = generate_problem(32, 0, 5, 16, 0.0, 3);
    REQUIRE(nonzero_support(prob.theta_star).empty());
    CosampResult res = cosamp(prob, make_hard_threshold_projector());
    CHECK(recovery_error(res.theta_hat, prob.theta_star) == 0.0);
}

TEST_CASE("cosamp diagnostics are populated", "[recovery]") {
    RecoveryProblem prob = generate_problem(48, 3, 8, 48, 0.0, 5);
    CosampResult res = cosamp(prob, make_separated_projector(8, SeparatedEngine::Recover));
    CHECK(res.diagnostics.iterations >= 1);
    CHECK(res.diagnostics.residual_norms.size() ==
          static_cast<std::size_t>(res.diagnostics.iterations));
    CHECK(res.diagnostics.projector_seconds.size() ==
          static_cast<std::size_t>(res.diagnostics.iterations));
    // noiseless and overdetermined: the final residual is tiny
    CHECK(res.diagnostics.residual_norms.back() < 1e-7);
}

TEST_CASE("underdetermined trials favor the structure-aware projector", "[recovery]") {
    // Light version of the acceptance sweep: at every swept n the separated
    // projector succeeds at least as often as hard thresholding, up to one
    // seed of statistical slack.
    const Index d = 128, k = 6, delta = 20;
    bool separated_wins_somewhere = false;
    for (Index n : {24, 30, 42}) {
        int sep_ok = 0, hard_ok = 0;
        for (int t = 0; t < 10; ++t) {
            RecoveryProblem prob =
                generate_problem(d, k, delta, n, 0.05, 1000 + 100 * n + t);
            CosampResult sep =
                cosamp(prob, make_separated_projector(delta, SeparatedEngine::Lassp));
            CosampResult hard = cosamp(prob, make_hard_threshold_projector());
            sep_ok += nonzero_support(sep.theta_hat) == nonzero_support(prob.theta_star);
            hard_ok += nonzero_support(hard.theta_hat) == nonzero_support(prob.theta_star);
        }
        INFO("n=" << n << " separated=" << sep_ok << " hard=" << hard_ok);
        CHECK(sep_ok >= hard_ok - 1);
        separated_wins_somewhere |= sep_ok > hard_ok;
    }
    CHECK(separated_wins_somewhere);
}

TEST_CASE("noiseless golden config: exact support recovery at n >= 4k log(d/k)",
          "[recovery][golden]") {
    // d = 512, k = 10: 4k * log(d/k) = 40 * log(51.2) ~ 158 measurements.
    const Index d = 512, k = 10, delta = 44, n = 158;
    int ok = 0;
    for (int t = 0; t < 20; ++t) {
        RecoveryProblem prob = generate_problem(d, k, delta, n, 0.0, 40000 + t);
        CosampResult res =
            cosamp(prob, make_separated_projector(delta, SeparatedEngine::Lassp, 32, t + 1));
        ok += nonzero_support(res.theta_hat) == nonzero_support(prob.theta_star);
    }
    CHECK(ok >= 18);  // >= 90% of 20 seeded trials
}

TEST_CASE("blocks projector expands starts to whole blocks", "[recovery]") {
    std::vector<double> v(20, 0.0);
    v[4] = 2.0;
    v[5] = 2.0;
    v[12] = 1.5;
    v[13] = 1.5;
    Projector proj = make_blocks_projector(3, 2);
    std::vector<Index> out = proj(v, 2);
    CHECK(out == std::vector<Index>{5, 6, 13, 14});
}
