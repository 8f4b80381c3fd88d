// Command-line front end: project signals onto the separated sparsity model,
// generate synthetic instances, run recovery experiments, benchmark the
// algorithms against each other, and self-test against the brute-force
// oracle.
//
// Exit codes: 0 success, 1 selftest failure, 2 infeasible parameters,
// 3 malformed input file, 4 cross-algorithm value mismatch in bench.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sepsparse/selftest.hpp"
#include "sepsparse/sepsparse.hpp"

namespace {

using namespace sepsparse;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr int kExitInfeasible = 2;
constexpr int kExitBadInput = 3;
constexpr int kExitBenchMismatch = 4;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

json support_to_json(const Support& s) {
    json arr = json::array();
    for (Index i : s.indices) arr.push_back(i);
    return arr;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = seed;
    for (std::uint64_t v : {a, b}) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

int run_project(const std::string& input, Index k, Index delta, const std::string& algo,
                int gamma, std::uint64_t seed) {
    std::vector<double> signal;
    try {
        signal = read_signal_csv(input);
    } catch (const InvalidInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    std::vector<WideInt> costs;
    try {
        costs = quantize_signal(signal, QuantizationConfig{gamma});
    } catch (const InvalidInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    const Index d = static_cast<Index>(costs.size());
    if (!feasible_params(d, k, delta)) {
        std::cerr << "error: no " << delta << "-separated support of size " << k << " fits in d="
                  << d << "\n";
        return kExitInfeasible;
    }
    ProjectionInstance inst(costs, k, delta);
    json out;
    out["algo"] = algo;
    out["d"] = d;
    out["k"] = k;
    out["delta"] = delta;
    out["gamma"] = gamma;
    const auto t0 = Clock::now();
    if (algo == "lassp") {
        std::mt19937_64 rng(seed);
        LasspResult r = lassp(inst, rng);
        out["wall_time_s"] = seconds_since(t0);
        out["support"] = support_to_json(r.support);
        out["value"] = r.value.str();
        out["iterations"] = r.iterations;
    } else if (algo == "recover") {
        auto [s, v] = recover(inst);
        out["wall_time_s"] = seconds_since(t0);
        out["support"] = support_to_json(s);
        out["value"] = v.str();
    } else if (algo == "dp") {
        auto [s, v] = dp_folklore(inst.costs, delta, k);
        out["wall_time_s"] = seconds_since(t0);
        out["support"] = support_to_json(s);
        out["value"] = v.str();
    } else if (algo == "dp-fast") {
        auto [s, v] = dp_improved(inst.costs, delta, k);
        out["wall_time_s"] = seconds_since(t0);
        out["support"] = support_to_json(s);
        out["value"] = v.str();
    } else if (algo == "approx2") {
        auto [s, v] = head_approx_2(inst.costs, delta, k);
        out["wall_time_s"] = seconds_since(t0);
        out["support"] = support_to_json(s);
        out["value"] = v.str();
        out["short_support"] = s.size() < k;
    } else {
        std::cerr << "error: unknown algo '" << algo << "'\n";
        return kExitBadInput;
    }
    std::cout << out.dump() << "\n";
    return 0;
}

int run_gen(Index d, double alpha, double beta, double sigma, std::uint64_t seed,
            const std::string& out_path) {
    GeneratorParams p;
    p.d = d;
    p.alpha = alpha;
    p.beta = beta;
    p.sigma = sigma;
    p.seed = seed;
    GeneratedSignal g;
    try {
        g = generate_signal(p);
    } catch (const InvalidParamsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    }
    write_signal_csv(out_path, g.signal);
    json side;
    side["d"] = d;
    side["k"] = g.k;
    side["delta"] = g.delta;
    side["sigma"] = sigma;
    side["seed"] = seed;
    side["signal"] = out_path;
    side["support"] = support_to_json(g.support);
    std::ofstream sidecar(out_path + ".json");
    sidecar << side.dump(2) << "\n";
    std::cout << side.dump() << "\n";
    return 0;
}

int run_selftest_cmd(Index max_d, Index max_delta, int trials, std::uint64_t seed) {
    SelftestOptions opt;
    opt.max_d = max_d;
    opt.max_delta = max_delta;
    opt.trials = trials;
    opt.seed = seed;
    const auto t0 = Clock::now();
    SelftestReport rep = run_selftest(opt);
    std::cout << "shapes:    " << rep.shapes << "\n"
              << "instances: " << rep.instances << "\n"
              << "checks:    " << rep.checks << "\n"
              << "failures:  " << rep.failures << "\n"
              << "time_s:    " << seconds_since(t0) << "\n";
    if (!rep.passed()) {
        std::cout << "FAIL first counterexample: " << rep.first_failure << "\n";
        return 1;
    }
    std::cout << "PASS\n";
    return 0;
}

struct BenchAlgo {
    std::string name;

    std::pair<WideInt, double> run(const ProjectionInstance& inst, std::uint64_t seed) const {
        const auto t0 = Clock::now();
        if (name == "lassp") {
            std::mt19937_64 rng(seed);
            LasspResult r = lassp(inst, rng);
            return {r.value, seconds_since(t0)};
        }
        if (name == "recover") {
            auto [s, v] = recover(inst);
            return {v, seconds_since(t0)};
        }
        if (name == "dp") {
            auto [s, v] = dp_folklore(inst.costs, inst.delta, inst.k);
            return {v, seconds_since(t0)};
        }
        if (name == "dp-fast") {
            auto [s, v] = dp_improved(inst.costs, inst.delta, inst.k);
            return {v, seconds_since(t0)};
        }
        throw InvalidInputError("bench: unknown algo '" + name + "'");
    }
};

double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int run_bench(const std::string& config_path) {
    auto cfg = read_kv_config(config_path);
    auto get = [&](const std::string& key, const std::string& fallback) {
        auto it = cfg.find(key);
        return it == cfg.end() ? fallback : it->second;
    };
    const auto d_list = split_list(get("d_list", "1000,10000"));
    const auto algo_names = split_list(get("algos", "dp,lassp"));
    const int trials = std::stoi(get("trials", "10"));
    const std::uint64_t seed = std::stoull(get("seed", "1"));
    const int gamma = std::stoi(get("gamma", "32"));
    const double alpha = std::stod(get("alpha", "50"));
    const double beta = std::stod(get("beta", "5"));
    const double sigma = std::stod(get("sigma", "0.1"));
    const std::string out_path = get("out", "");
    if (trials < 1) throw InvalidInputError("bench: trials must be >= 1");

    std::ostringstream csv;
    csv << "d,k,delta,algo,time_mean,time_std,time_median,value_checksum\n";
    const WideInt checksum_mod = (WideInt(1) << 61) - 1;
    for (const std::string& d_str : d_list) {
        const Index d = std::stoll(d_str);
        Index k, delta;
        if (cfg.count("k") && cfg.count("delta")) {  // fixed across the sweep
            k = std::stoll(cfg.at("k"));
            delta = std::stoll(cfg.at("delta"));
            if (!feasible_params(d, k, delta))
                throw InfeasibleError("bench: fixed (k, delta) infeasible at d=" + d_str);
        } else {
            GeneratorParams gp;
            gp.d = d;
            gp.alpha = alpha;
            gp.beta = beta;
            gp.sigma = sigma;
            std::tie(k, delta) = derived_sparsity(gp);
        }

        std::vector<ProjectionInstance> instances;
        instances.reserve(static_cast<std::size_t>(trials));
        for (int t = 0; t < trials; ++t) {
            GeneratedSignal g =
                generate_signal(d, k, delta, sigma, mix_seed(seed, static_cast<std::uint64_t>(d),
                                                             static_cast<std::uint64_t>(t)));
            instances.emplace_back(quantize_signal(g.signal, QuantizationConfig{gamma}), k, delta);
        }

        std::vector<WideInt> reference(static_cast<std::size_t>(trials));
        bool have_reference = false;
        for (const std::string& algo_name : algo_names) {
            BenchAlgo algo{algo_name};
            std::vector<double> times;
            WideInt checksum = 0;
            for (int t = 0; t < trials; ++t) {
                auto [value, secs] =
                    algo.run(instances[static_cast<std::size_t>(t)],
                             mix_seed(seed ^ 0xbe9cULL, static_cast<std::uint64_t>(d),
                                      static_cast<std::uint64_t>(t)));
                times.push_back(secs);
                if (!have_reference) {
                    reference[static_cast<std::size_t>(t)] = value;
                } else if (reference[static_cast<std::size_t>(t)] != value) {
                    std::cerr << "error: value mismatch at d=" << d << " trial=" << t << " algo="
                              << algo_name << " (" << value.str() << " vs "
                              << reference[static_cast<std::size_t>(t)].str() << ")\n";
                    return kExitBenchMismatch;
                }
                checksum = (checksum + value) % checksum_mod;
            }
            have_reference = true;
            csv << d << "," << k << "," << delta << "," << algo_name << "," << mean_of(times)
                << "," << std_of(times) << "," << median_of(times) << "," << checksum.str()
                << "\n";
        }
    }
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path);
        if (!out) throw InvalidInputError("bench: cannot write " + out_path);
        out << csv.str();
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

Projector make_projector(const std::string& name, Index delta, Index b, int gamma,
                         std::uint64_t seed) {
    if (name == "hard") return make_hard_threshold_projector();
    if (name == "separated:lassp") return make_separated_projector(delta, SeparatedEngine::Lassp, gamma, seed);
    if (name == "separated:recover")
        return make_separated_projector(delta, SeparatedEngine::Recover, gamma, seed);
    if (name == "separated:dp")
        return make_separated_projector(delta, SeparatedEngine::DpFolklore, gamma, seed);
    if (name == "blocks") return make_blocks_projector(delta, b, BlockEngine::Recover, gamma);
    throw InvalidInputError("unknown projector '" + name + "'");
}

int run_recover_cmd(const std::string& config_path) {
    auto cfg = read_kv_config(config_path);
    auto get = [&](const std::string& key, const std::string& fallback) {
        auto it = cfg.find(key);
        return it == cfg.end() ? fallback : it->second;
    };
    // A user-supplied ground truth can replace the synthetic spike train;
    // its sparsity is taken from the nonzero count.
    std::vector<double> user_theta;
    Index d, k, delta;
    if (cfg.count("signal")) {
        user_theta = read_signal_csv(cfg.at("signal"));
        d = static_cast<Index>(user_theta.size());
        if (!cfg.count("delta"))
            throw InvalidInputError("recover: delta is required with signal=");
        delta = std::stoll(cfg.at("delta"));
        k = static_cast<Index>(nonzero_support(user_theta).size());
        Support supp{nonzero_support(user_theta)};
        if (!supp.separated_by(delta))
            throw InvalidInputError("recover: signal support is not delta-separated");
    } else {
        d = std::stoll(get("d", "512"));
        if (cfg.count("k") && cfg.count("delta")) {
            k = std::stoll(cfg["k"]);
            delta = std::stoll(cfg["delta"]);
        } else {
            GeneratorParams gp;
            gp.d = d;
            gp.alpha = std::stod(get("alpha", "50"));
            gp.beta = std::stod(get("beta", "5"));
            std::tie(k, delta) = derived_sparsity(gp);
        }
    }
    const Index n = std::stoll(get("n", "160"));
    const double sigma = std::stod(get("sigma", "0.1"));
    const int trials = std::stoi(get("trials", "20"));
    const std::uint64_t seed = std::stoull(get("seed", "1"));
    const int max_iters = std::stoi(get("max_iters", "50"));
    const double tol = std::stod(get("tol", "1e-8"));
    const int gamma = std::stoi(get("gamma", "32"));
    const Index b = std::stoll(get("b", "1"));
    const std::string projector_name = get("projector", "separated:lassp");
    if (!feasible_params(d, k, delta)) {
        std::cerr << "error: infeasible (d, k, delta)\n";
        return kExitInfeasible;
    }

    int successes = 0;
    std::vector<double> errors;
    std::vector<double> iters;
    std::vector<double> proj_secs;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = mix_seed(seed, 0xc05a3b, static_cast<std::uint64_t>(t));
        RecoveryProblem prob = user_theta.empty()
                                   ? generate_problem(d, k, delta, n, sigma, trial_seed)
                                   : generate_problem(user_theta, k, delta, n, sigma, trial_seed);
        Projector projector = make_projector(projector_name, delta, b, gamma, trial_seed ^ 1);
        CosampResult res = cosamp(prob, projector, max_iters, tol);
        const bool ok = nonzero_support(res.theta_hat) == nonzero_support(prob.theta_star);
        successes += ok ? 1 : 0;
        errors.push_back(recovery_error(res.theta_hat, prob.theta_star));
        iters.push_back(res.diagnostics.iterations);
        double ps = 0;
        for (double x : res.diagnostics.projector_seconds) ps += x;
        proj_secs.push_back(ps);
    }
    json out;
    out["d"] = d;
    out["k"] = k;
    out["delta"] = delta;
    out["n"] = n;
    out["sigma"] = sigma;
    out["trials"] = trials;
    out["projector"] = projector_name;
    out["success_rate"] = static_cast<double>(successes) / std::max(trials, 1);
    out["mean_error"] = mean_of(errors);
    out["median_error"] = median_of(errors);
    out["mean_iterations"] = mean_of(iters);
    out["mean_projector_seconds"] = mean_of(proj_secs);
    const std::string out_path = get("out", "");
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        f << out.dump(2) << "\n";
    }
    std::cout << out.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact projections onto the separated sparsity model"};
    app.require_subcommand(1);

    // project
    auto* project = app.add_subcommand("project", "Project a signal file onto M_{k,Delta}");
    std::string input, algo = "lassp";
    Index k = 0, delta = 1;
    int gamma = 32;
    std::uint64_t seed = 0;
    project->add_option("--input", input, "single-column CSV signal")->required();
    project->add_option("--k", k, "sparsity")->required();
    project->add_option("--delta", delta, "minimum separation")->required();
    project->add_option("--algo", algo, "lassp | recover | dp | dp-fast | approx2");
    project->add_option("--gamma", gamma, "quantization bits");
    project->add_option("--seed", seed, "rng seed (lassp)");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic separated-sparse signal");
    Index gen_d = 1000;
    double alpha = 50.0, beta = 5.0, sigma = 0.1;
    std::uint64_t gen_seed = 0;
    std::string gen_out = "signal.csv";
    gen->add_option("--d", gen_d, "dimension")->required();
    gen->add_option("--alpha", alpha, "k = floor(d / alpha)");
    gen->add_option("--beta", beta, "delta = floor((d - beta (k+1)) / k - 1)");
    gen->add_option("--sigma", sigma, "noise level");
    gen->add_option("--seed", gen_seed, "rng seed");
    gen->add_option("--out", gen_out, "output CSV path");

    // selftest
    auto* selftest = app.add_subcommand("selftest", "Oracle-equivalence and invariant suite");
    Index max_d = 12, max_delta = 4;
    int trials = 200;
    std::uint64_t st_seed = 1;
    selftest->add_option("--max-d", max_d, "largest dimension (<= 24)");
    selftest->add_option("--max-delta", max_delta, "largest separation");
    selftest->add_option("--trials", trials, "random instances per shape");
    selftest->add_option("--seed", st_seed, "rng seed");

    // bench
    auto* bench = app.add_subcommand("bench", "Timing sweeps with cross-algorithm value checks");
    std::string bench_config;
    bench->add_option("--config", bench_config, "key=value config file")->required();

    // recover
    auto* recover_cmd = app.add_subcommand("recover", "CoSaMP recovery experiment");
    std::string recover_config;
    recover_cmd->add_option("--config", recover_config, "key=value config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (project->parsed()) return run_project(input, k, delta, algo, gamma, seed);
        if (gen->parsed()) return run_gen(gen_d, alpha, beta, sigma, gen_seed, gen_out);
        if (selftest->parsed()) return run_selftest_cmd(max_d, max_delta, trials, st_seed);
        if (bench->parsed()) return run_bench(bench_config);
        if (recover_cmd->parsed()) return run_recover_cmd(recover_config);
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const InvalidParamsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const InvalidInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
