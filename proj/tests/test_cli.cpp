#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CmdResult {
    int exit_code;
    std::string out;
};

CmdResult run_cli(const std::string& args) {
    const std::string cmd = std::string(SEPSPARSE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("sepsparse_test_" + name);
}

void write_lines(const fs::path& p, const std::vector<std::string>& lines) {
    std::ofstream f(p);
    for (const auto& l : lines) f << l << "\n";
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("project subcommand on the counterexample signal", "[cli]") {
    const fs::path sig = temp_file("counter.csv");
    write_lines(sig, {"2", "2.6457513110645906", "2.23606797749979", "0", "0",
                      "2.23606797749979", "2.8284271247461903", "2.23606797749979"});
    // squared entries are (4, 7, 5, 0, 0, 5, 8, 5) up to rounding
    for (const std::string algo : {"recover", "dp", "dp-fast", "lassp"}) {
        CmdResult r = run_cli("project --input " + sig.string() + " --k 3 --delta 2 --algo " +
                              algo + " --gamma 3");
        INFO("algo=" << algo << " out=" << r.out);
        REQUIRE(r.exit_code == 0);
        json j = json::parse(r.out);
        CHECK(j["value"] == "17");
        CHECK(j["support"].size() == 3);
        if (algo == "lassp") CHECK(j["iterations"].get<int>() >= 1);
    }
}

TEST_CASE("project flags a short approx2 support", "[cli]") {
    const fs::path sig = temp_file("short.csv");
    write_lines(sig, {"1", "10", "1"});
    CmdResult r = run_cli("project --input " + sig.string() + " --k 2 --delta 2 --algo approx2");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["short_support"] == true);
    CHECK(j["support"] == json::array({2}));
}

TEST_CASE("project exit codes", "[cli]") {
    const fs::path sig = temp_file("tiny.csv");
    write_lines(sig, {"1", "2", "3"});
    SECTION("k = 0 succeeds with an empty support") {
        CmdResult r = run_cli("project --input " + sig.string() + " --k 0 --delta 2");
        REQUIRE(r.exit_code == 0);
        json j = json::parse(r.out);
        CHECK(j["support"].empty());
        CHECK(j["value"] == "0");
    }
    SECTION("infeasible parameters exit 2") {
        CmdResult r = run_cli("project --input " + sig.string() + " --k 3 --delta 2");
        CHECK(r.exit_code == 2);
    }
    SECTION("malformed CSV exits 3") {
        const fs::path bad = temp_file("bad.csv");
        write_lines(bad, {"1.5", "not-a-number", "2"});
        CmdResult r = run_cli("project --input " + bad.string() + " --k 1 --delta 1");
        CHECK(r.exit_code == 3);
    }
    SECTION("missing file exits 3") {
        CmdResult r = run_cli("project --input /nonexistent.csv --k 1 --delta 1");
        CHECK(r.exit_code == 3);
    }
}

TEST_CASE("gen subcommand is deterministic and reports derived parameters", "[cli]") {
    const fs::path out1 = temp_file("gen1.csv");
    const fs::path out2 = temp_file("gen2.csv");
    CmdResult r1 = run_cli("gen --d 1000 --alpha 50 --beta 5 --sigma 0.1 --seed 7 --out " +
                           out1.string());
    CmdResult r2 = run_cli("gen --d 1000 --alpha 50 --beta 5 --sigma 0.1 --seed 7 --out " +
                           out2.string());
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    CHECK(slurp(out1) == slurp(out2));
    json side = json::parse(r1.out);
    CHECK(side["k"] == 20);
    CHECK(side["delta"] == 43);
    CHECK(side["support"].size() == 20);
    CHECK(fs::exists(out1.string() + ".json"));

    SECTION("noiseless generation has exactly k nonzero lines") {
        const fs::path clean = temp_file("gen_clean.csv");
        run_cli("gen --d 1000 --alpha 50 --beta 5 --sigma 0 --seed 7 --out " + clean.string());
        std::ifstream f(clean);
        std::string line;
        int nonzero = 0;
        while (std::getline(f, line))
            if (line != "0" && !line.empty()) ++nonzero;
        CHECK(nonzero == 20);
    }
    SECTION("infeasible generator parameters exit 2") {
        CmdResult r = run_cli("gen --d 100 --alpha 200 --out " + temp_file("x.csv").string());
        CHECK(r.exit_code == 2);
    }
}

TEST_CASE("bench subcommand cross-checks values and emits CSV", "[cli]") {
    const fs::path cfg = temp_file("bench.cfg");
    const fs::path out = temp_file("bench.csv");
    write_lines(cfg, {"d_list=60,120", "algos=dp,dp-fast,lassp,recover", "trials=2", "seed=3",
                      "alpha=10", "beta=1", "sigma=0.1", "out=" + out.string()});
    CmdResult r = run_cli("bench --config " + cfg.string());
    REQUIRE(r.exit_code == 0);
    std::ifstream f(out);
    std::string header;
    std::getline(f, header);
    CHECK(header == "d,k,delta,algo,time_mean,time_std,time_median,value_checksum");
    std::map<std::string, std::vector<std::string>> checksums_by_d;
    std::string line;
    int rows = 0;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        ++rows;
        std::stringstream ss(line);
        std::vector<std::string> cols;
        std::string col;
        while (std::getline(ss, col, ',')) cols.push_back(col);
        REQUIRE(cols.size() == 8);
        checksums_by_d[cols[0]].push_back(cols[7]);
    }
    CHECK(rows == 8);  // 2 sizes x 4 algorithms
    for (const auto& [d, sums] : checksums_by_d)
        for (const auto& s : sums) CHECK(s == sums[0]);
}

TEST_CASE("recover subcommand runs a small experiment", "[cli]") {
    const fs::path cfg = temp_file("recover.cfg");
    write_lines(cfg, {"d=64", "k=3", "delta=10", "n=64", "sigma=0", "trials=2", "seed=5",
                      "projector=separated:lassp"});
    CmdResult r = run_cli("recover --config " + cfg.string());
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["trials"] == 2);
    CHECK(j["success_rate"].get<double>() == 1.0);
    CHECK(j["mean_error"].get<double>() < 1e-6);
}

TEST_CASE("recover subcommand accepts a user-supplied signal", "[cli]") {
    const fs::path sig = temp_file("user_signal.csv");
    run_cli("gen --d 128 --alpha 16 --beta 2 --sigma 0 --seed 11 --out " + sig.string());
    const fs::path cfg = temp_file("recover_user.cfg");
    write_lines(cfg, {"signal=" + sig.string(), "delta=12", "n=96", "sigma=0", "trials=2",
                      "seed=5", "projector=separated:recover"});
    CmdResult r = run_cli("recover --config " + cfg.string());
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["d"] == 128);
    CHECK(j["k"] == 8);
    CHECK(j["success_rate"].get<double>() == 1.0);
}

TEST_CASE("selftest subcommand passes on a small sweep", "[cli]") {
    CmdResult r = run_cli("selftest --max-d 7 --max-delta 3 --trials 10 --seed 2");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("PASS") != std::string::npos);
    SECTION("trials=0 still runs the exhaustive part") {
        CmdResult r0 = run_cli("selftest --max-d 6 --max-delta 2 --trials 0");
        REQUIRE(r0.exit_code == 0);
        CHECK(r0.out.find("instances: 0") == std::string::npos);
    }
}
