#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

// Drives the installed binary as a subprocess and checks the documented
// external contract: exit codes, config precedence, report schema, artifacts.

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* p = std::getenv("QSS_CLI");
    REQUIRE_MESSAGE(p != nullptr, "QSS_CLI must point at the command-line binary");
    return p;
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = cli_path() + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path fresh_dir(const char* name) {
    fs::path dir = fs::temp_directory_path() / "qss_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

nlohmann::json load_json(const fs::path& p) {
    std::ifstream in(p);
    const std::string missing = "missing " + p.string();
    REQUIRE_MESSAGE(in.good(), missing);
    return nlohmann::json::parse(in);
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

}  // namespace

TEST_CASE("honest run writes a report and transcript and exits 0") {
    fs::path dir = fresh_dir("honest");
    RunResult r = run_cli("run --rounds 3000 --seed 5 --output-dir " + dir.string() +
                          " --transcript t.txt");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("decision: accept") != std::string::npos);

    nlohmann::json rep = load_json(dir / "report.json");
    CHECK(rep["schema"] == "qss-report/1");
    CHECK(rep["seed"] == 5);
    CHECK(rep["config"]["rounds"] == 3000);
    CHECK(rep["counts"]["rounds"] == 3000);
    CHECK(rep["decision"]["status"] == "accept");
    CHECK(rep["qber"] == 0.0);
    CHECK(rep["attack"].is_null());
    CHECK(rep["estimates"]["i1"]["value"].get<double>() == doctest::Approx(0.5));
    long long key_len = rep["key"]["length"].get<long long>();
    CHECK(key_len == static_cast<long long>(rep["key"]["bits"].get<std::string>().size()));

    CHECK(first_line(dir / "t.txt") == "# qss-transcript v1");
}

TEST_CASE("attacked run aborts with exit 2 and reports the wiretap marginals") {
    fs::path dir = fresh_dir("attacked");
    RunResult r = run_cli("run --rounds 12000 --seed 5 --attack intercept --quiet --output-dir " +
                          dir.string());
    CHECK(r.exit_code == 2);
    nlohmann::json rep = load_json(dir / "report.json");
    CHECK(rep["decision"]["status"] == "abort");
    CHECK(rep["attack"]["mode"] == "intercept");
    CHECK(rep["attack"]["marginal_i1"].get<double>() == doctest::Approx(-0.25).epsilon(1e-9));
    CHECK(rep["attack"]["marginal_i2"].get<double>() == doctest::Approx(-0.25).epsilon(1e-9));
    CHECK(rep["attack"]["adversary_accuracy"].get<double>() > 0.5);
}

TEST_CASE("unmatchable witness terms exit 3 with insufficient data") {
    fs::path dir = fresh_dir("insufficient");
    RunResult r =
        run_cli("run --rounds 200 --q-z 0 --test-fraction 1 --quiet --output-dir " + dir.string());
    CHECK(r.exit_code == 3);
    nlohmann::json rep = load_json(dir / "report.json");
    CHECK(rep["decision"]["status"] == "insufficient_data");
}

TEST_CASE("usage errors exit 1") {
    CHECK(run_cli("run").exit_code == 1);                       // rounds missing
    CHECK(run_cli("definitely-not-a-subcommand").exit_code == 1);
    CHECK(run_cli("run --rounds 10 --attack bogus").exit_code == 1);
    RunResult r = run_cli("run --rounds 10 --q-z 1.5");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("error") != std::string::npos);
}

TEST_CASE("config file merges under command-line flags") {
    fs::path dir = fresh_dir("config");
    {
        std::ofstream cfg(dir / "run.cfg");
        cfg << "# comment line\n";
        cfg << "rounds = 2000\n";
        cfg << "seed = 9\n";
        cfg << "attack = none\n";
    }
    RunResult r = run_cli("run --config " + (dir / "run.cfg").string() +
                          " --seed 11 --quiet --output-dir " + dir.string());
    CHECK(r.exit_code == 0);
    nlohmann::json rep = load_json(dir / "report.json");
    CHECK(rep["seed"] == 11);  // flag wins over file
    CHECK(rep["config"]["rounds"] == 2000);

    {
        std::ofstream cfg(dir / "bad.cfg");
        cfg << "bogus = 1\n";
    }
    RunResult bad = run_cli("run --config " + (dir / "bad.cfg").string() + " --rounds 10");
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("unknown key") != std::string::npos);

    {
        std::ofstream cfg(dir / "dup.cfg");
        cfg << "seed = 1\nseed = 2\n";
    }
    CHECK(run_cli("run --config " + (dir / "dup.cfg").string() + " --rounds 10").exit_code == 1);
}

TEST_CASE("output directory falls back to the environment variable") {
    fs::path dir = fresh_dir("envdir");
    setenv("QSS_OUTPUT_DIR", dir.c_str(), 1);
    RunResult r = run_cli("run --rounds 400 --quiet");
    unsetenv("QSS_OUTPUT_DIR");
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "report.json"));
}

TEST_CASE("truth table prints the full grid") {
    RunResult r = run_cli("truth-table");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("x+   x+  x-  y-  y+") != std::string::npos);
    CHECK(r.output.find("y-   y+  y-  x+  x-") != std::string::npos);
}

TEST_CASE("witness table lists terms and the resource value") {
    RunResult r = run_cli("witness-table --parties 4 --variant i1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("xxxx") != std::string::npos);
    CHECK(r.output.find("-7/8") != std::string::npos);
    CHECK(r.output.find("exact value on the matching resource state: 1.000000") !=
          std::string::npos);
    CHECK(run_cli("witness-table --variant nope").exit_code == 1);
}

TEST_CASE("attack demo modes map to the documented exit codes") {
    CHECK(run_cli("attack-demo --mode original --rounds 2000 --seed 3").exit_code == 0);
    CHECK(run_cli("attack-demo --mode modified --rounds 10000 --seed 3").exit_code == 2);
    CHECK(run_cli("attack-demo --mode control --rounds 10000 --seed 3").exit_code == 0);
    CHECK(run_cli("attack-demo --mode sideways").exit_code == 1);
}

TEST_CASE("sweep writes one row per sampled point") {
    fs::path dir = fresh_dir("sweep");
    RunResult r = run_cli("sweep --points 40 --refine 4 --seed 4 --output-dir " + dir.string() +
                          " --out rows.csv");
    CHECK(r.exit_code == 0);
    std::ifstream in(dir / "rows.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line.substr(0, 9) == "p0,p1,p2,");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 40);
}

TEST_CASE("identical invocations write identical artifacts") {
    fs::path d1 = fresh_dir("det1");
    fs::path d2 = fresh_dir("det2");
    std::string args = "run --rounds 1500 --seed 42 --attack intercept --quiet --transcript t.txt";
    CHECK(run_cli(args + " --output-dir " + d1.string()).exit_code == 2);
    CHECK(run_cli(args + " --output-dir " + d2.string()).exit_code == 2);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    CHECK(slurp(d1 / "report.json") == slurp(d2 / "report.json"));
    CHECK(slurp(d1 / "t.txt") == slurp(d2 / "t.txt"));
    CHECK(!slurp(d1 / "t.txt").empty());
}
