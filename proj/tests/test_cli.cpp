#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("deltaq_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Run run(const std::string& args) {
    const fs::path out = scratch_dir() / "stdout.txt";
    const fs::path err = scratch_dir() / "stderr.txt";
    const std::string cmd = std::string(DELTAQ_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

int count_lines(const std::string& s) {
    int n = 0;
    for (const char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("sample-path with an empty pool is a three-line CSV") {
    const Run r = run("sample-path --n 0 --q 1 --seed 1");
    CHECK(r.code == 0);
    CHECK(count_lines(r.out) == 3);
    CHECK(r.out.rfind("k,A,N,Q,served_index,parent_index", 0) == 0);
}

TEST_CASE("sample-path drift column at t = 1 is 2 - gamma") {
    const Run r = run("sample-path --n 10000 --alpha 0.5 --beta 1 --q 1 --dist exp:1 --seed 7 --grid 0.5");
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    bool found = false;
    while (std::getline(in, line)) {
        if (line.rfind("1,", 0) != 0) continue;
        const double drift = std::stod(line.substr(line.rfind(',') + 1));
        CHECK(drift == doctest::Approx(2.0 - 0.8488263631567751241).epsilon(1e-14));
        found = true;
    }
    CHECK(found);
}

TEST_CASE("identical flags and seed give byte-identical output") {
    for (const std::string args :
         {"sample-path --n 2000 --alpha 1 --seed 3", "busy-period-mc --n 300 --reps 200 --alpha 0.5 --seed 4",
          "diffusion-mc --gamma 0.5 --sigma2 2 --dt 1e-3 --reps 300 --seed 5",
          "figure2 --ns 50,100 --reps 200 --points 41 --seed 6"}) {
        CAPTURE(args);
        const Run a = run(args + " --threads 1");
        const Run b = run(args);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(a.err == b.err);
        CHECK(!a.out.empty());
    }
}

TEST_CASE("airy means") {
    const Run a = run("airy --gamma 0.5 --sigma2 2 --q 1 --beta 1 --mean");
    CHECK(a.code == 0);
    CHECK(std::abs(std::stod(a.out) - 2.0038) < 0.005);
    CHECK(a.out.find('.') + 5 == a.out.size() - 1);  // four decimals
    const Run e = run("airy --dist exp:1 --alpha 1 --q 1 --beta 1 --mean");
    CHECK(std::abs(std::stod(e.out) - 1.0440) < 0.005);
    const Run d = run("airy --dist det:1 --alpha 0 --q 1 --beta 1 --mean");
    CHECK(std::abs(std::stod(d.out) - 2.3374) < 0.005);
    const Run grid = run("airy --gamma 0.5 --sigma2 2 --points 5 --tmax 2 --cdf");
    CHECK(grid.code == 0);
    CHECK(count_lines(grid.out) == 6);
    CHECK(grid.out.rfind("t,density,cdf", 0) == 0);
}

TEST_CASE("busy-period-mc modes differ only in lambda, initial queue and scaling") {
    const Run t1 = run("busy-period-mc --n 100 --reps 50 --seed 1 --summary " + (scratch_dir() / "t1.json").string());
    const Run t2 = run("busy-period-mc --n 100 --reps 50 --seed 1 --lambda 0.01 --summary " +
                       (scratch_dir() / "t2.json").string());
    REQUIRE(t1.code == 0);
    REQUIRE(t2.code == 0);
    const auto j1 = nlohmann::json::parse(slurp(scratch_dir() / "t1.json"));
    const auto j2 = nlohmann::json::parse(slurp(scratch_dir() / "t2.json"));
    CHECK(j1.at("scaled") == true);
    CHECK(j2.at("scaled") == false);
    CHECK(j1.at("lambda") == 1.0);
    CHECK(j2.at("lambda") == 0.01);
    CHECK(j1.at("initial_queue") == 5);
    CHECK(j2.at("initial_queue") == 1);
    CHECK(j1.at("dist") == j2.at("dist"));
    CHECK(t1.out.rfind("replication,bp,scaled_bp", 0) == 0);
    CHECK(count_lines(t1.out) == 51);
}

TEST_CASE("a single replication flags a degenerate interval") {
    const Run r = run("busy-period-mc --n 100 --reps 1 --seed 1");
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.err).at("summary").at("degenerate_ci") == true);
}

TEST_CASE("config file mirrors the flags and the command line wins") {
    const fs::path cfg = scratch_dir() / "cfg.json";
    std::ofstream(cfg) << R"({"command": "busy-period-mc", "n": 200, "reps": 30, "alpha": 0.5, "seed": 9,
                              "dist": {"kind": "hyperexponential", "probs": [0.5, 0.5], "rates": [0.501, 250.5]}})";
    const Run a = run("--config " + cfg.string());
    const Run b = run("busy-period-mc --n 200 --reps 30 --alpha 0.5 --seed 9 --dist hyperexp:0.5,0.5:0.501,250.5");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const Run c = run("busy-period-mc --config " + cfg.string() + " --reps 10");
    CHECK(count_lines(c.out) == 11);
    std::ofstream(scratch_dir() / "bad.json") << "{not json";
    CHECK(run("--config " + (scratch_dir() / "bad.json").string()).code == 2);
}

TEST_CASE("exit codes") {
    CHECK(run("").code == 2);
    CHECK(run("bogus").code == 2);
    CHECK(run("busy-period-mc --n 10").code == 2);                       // no seed
    CHECK(run("busy-period-mc --n 10 --seed 1 --alpha 2").code == 2);    // alpha outside [0,1]
    CHECK(run("busy-period-mc --n 10 --seed 1 --dist weibull:1").code == 2);
    CHECK(run("airy --gamma 0.5").code == 2);
    CHECK(run("sample-path --seed 1 --frobnicate").code == 2);
    CHECK(run("--help").code == 0);
    const Run short_horizon = run("diffusion-mc --gamma 0.5 --sigma2 2 --dt 1e-3 --horizon 0.5 --reps 100 --seed 1");
    CHECK(short_horizon.code == 3);
    CHECK(short_horizon.err.find("horizon") != std::string::npos);
}

TEST_CASE("noise-free diffusion hits at the analytic root") {
    const Run r = run("diffusion-mc --gamma 0.5 --sigma 0 --dt 1e-3 --reps 5 --seed 1");
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "hitting_time");
    const double root = 1.0 + std::sqrt(3.0);
    while (std::getline(in, line)) {
        const double t = std::stod(line);
        CHECK(t >= root);
        CHECK(t - root <= 1e-3 + 1e-12);
    }
}

TEST_CASE("check subcommand") {
    const Run r = run("check");
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
}
