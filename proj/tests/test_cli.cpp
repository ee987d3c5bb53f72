// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "catch_amalgamated.hpp"
#include "scnisac/config.hpp"
#include "scnisac/csv.hpp"
#include "scnisac/experiments.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;
using namespace scn;

namespace {

const std::vector<std::string> kSmall{
    "detector.trials=3000",      "detector.calibration_trials=4096", "validate.trials=4096",
    "validate.rate_trials=4096", "validate.snapshots=[2,8]",        "validate.tau=[2,5]",
    "validate.gamma_e=[1]",      "validate.n_u=[1]",                "validate.rho=[1,10]",
    "sweep.tau=[1.5,3,6]",       "sweep.p_dbm=[4,8]",               "sweep.r_min=[0,38,41]",
};

ExperimentConfig small_preset() { return load_config(PRESET_CONFIG, kSmall); }

std::string run(const std::string& command, const ExperimentConfig& c, int workers = 1, int* rc = nullptr) {
    std::ostringstream out;
    const int status = command_table().at(command)(c, out, RunOptions{workers});
    if (rc) *rc = status;
    return out.str();
}

std::string header_line(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
    return {};
}

int shell(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("isac_test_" + name)).string();
}

}  // namespace

TEST_CASE("preset configuration", "[cli]") {
    const auto c = load_config(PRESET_CONFIG);
    CHECK(c.scenario.n_t == 4);
    CHECK(c.scenario.n_r == 2);
    CHECK(c.scenario.n_u == 4);
    CHECK(c.scenario.sigma_s2_dbm == -105.0);
    CHECK(c.scenario.sigma_c2_dbm == -105.0);
    CHECK_THAT(c.scenario.theta, WithinRel(std::numbers::pi / 4, 1e-15));
    CHECK(c.scenario.trials == 100000);
    CHECK(c.detector.target_pf == 0.05);
}

TEST_CASE("configuration errors", "[cli]") {
    CHECK_THROWS_WITH(parse_config(R"({"seed": 1, "power": {"eta": 1.5}})"), ContainsSubstring("eta"));
    CHECK_THROWS_WITH(parse_config(R"({"snapshots": 8})"), ContainsSubstring("seed"));
    CHECK_THROWS_WITH(parse_config(R"({"seed": 1, "power": {"etta": 0.5}})"), ContainsSubstring("power.etta"));
    CHECK_THROWS_WITH(parse_config(R"({"seed": 1, "array": 4})"), ContainsSubstring("array"));
    CHECK_THROWS_WITH(parse_config("{\"seed\": 1,\n \"snapshots\": }"), ContainsSubstring("line 2"));
    CHECK_THROWS_WITH(parse_config(R"({"seed": 1, "snapshots": "many"})"), ContainsSubstring("snapshots"));
    CHECK_THROWS_AS(parse_config(R"({"seed": -3})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"seed": 1, "detector": {"kind": "GLRT"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"seed": 1})", {"detector.nope=3"}), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"seed": 1})", {"detector=3"}), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"seed": 1})", {"no_equals"}), ConfigError);
}

TEST_CASE("overrides", "[cli]") {
    const auto c = parse_config(R"({"seed": 1})", {"detector.trials=200000", "detector.kind=MaxEig",
                                                   "target.beta.im=0.25", "sweep.mu_db=[0,3]"});
    CHECK(c.scenario.trials == 200000);
    CHECK(c.detector.kind == DetectorKind::MaxEig);
    CHECK(c.scenario.beta.imag() == 0.25);
    CHECK(c.sweep.mu_db == std::vector<double>{0.0, 3.0});
}

TEST_CASE("CSV formatting", "[cli]") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e-300) == "1e-300");
    CHECK(format_number(42LL) == "42");
    CHECK(cell(std::optional<double>{}).empty());
}

TEST_CASE("every command writes its fixed header", "[cli]") {
    const auto c = small_preset();
    const std::vector<std::pair<std::string, std::string>> expected{
        {"validate", "check,L,tau,gamma_e,closed_form,oracle,stderr,pass"},
        {"roc", "mu_db,tau,pf_analytic,pf_mc,pf_stderr,pd_analytic,pd_mc,pd_stderr,trials"},
        {"pe-vs-tau", "mu_db,tau,pe_analytic"},
        {"pe-vs-mu", "detector,mu_db,pe_mc,pe_stderr,pf_mc,pf_stderr"},
        {"rate-vs-power", "mu_db,p_dbm,eta,rate,pf,pf_stderr,pe,pe_stderr"},
        {"pf-vs-power", "mu_db,p_dbm,eta,rate,pf,pf_stderr,pe,pe_stderr"},
        {"pe-vs-power", "mu_db,p_dbm,eta,rate,pf,pf_stderr,pe,pe_stderr"},
        {"allocate", "r_min,feasible,eta_star,tau_star,gamma_e,pe_star,achieved_rate"},
    };
    REQUIRE(expected.size() == command_table().size());
    for (const auto& [command, header] : expected) {
        const std::string out = run(command, c);
        CHECK(header_line(out) == header);
        CHECK_THAT(out, ContainsSubstring("# block_size=1024"));
        CHECK_THAT(out, !ContainsSubstring("worker"));
    }
}

TEST_CASE("runs are deterministic and independent of the worker count", "[cli]") {
    const auto c = small_preset();
    for (const char* command : {"validate", "roc", "pe-vs-mu", "pe-vs-power"}) {
        const std::string a = run(command, c, 1);
        CHECK(a == run(command, c, 1));
        CHECK(a == run(command, c, 4));
    }
}

TEST_CASE("command content", "[cli]") {
    const auto c = small_preset();
    SECTION("allocate marks the unreachable target infeasible") {
        const std::string out = run("allocate", c);
        CHECK_THAT(out, ContainsSubstring("\r\n0,true,0,"));
        CHECK_THAT(out, ContainsSubstring("\r\n41,false,,,,,\r\n"));
    }
    SECTION("validate exit status follows the checked rows only") {
        int rc = -1;
        const std::string out = run("validate", c, 1, &rc);
        CHECK_THAT(out, ContainsSubstring("pf_printed,"));
        CHECK_THAT(out, ContainsSubstring(",info\r\n"));
        const bool any_false = out.find(",false\r\n") != std::string::npos;
        CHECK(rc == (any_false ? kExitValidationFailed : kExitOk));
    }
    SECTION("rate-vs-power leaves the detector columns empty") {
        const std::string out = run("rate-vs-power", c);
        CHECK_THAT(out, ContainsSubstring(",,,,\r\n"));
    }
}

TEST_CASE("isac executable exit codes", "[cli]") {
    const std::string bin = ISAC_BINARY;
    const std::string out = temp_path("out.csv");
    const std::string bad = temp_path("bad.json");
    {
        std::ofstream f(bad);
        f << R"({"seed": 1, "power": {"eta": 1.5}})";
    }
    const std::string preset = PRESET_CONFIG;
    CHECK(shell(bin + " allocate --config " + preset + " --output " + out + " > /dev/null 2>&1") == kExitOk);
    CHECK(std::filesystem::file_size(out) > 0);
    CHECK(shell(bin + " allocate --config " + bad + " --output " + out + " > /dev/null 2>&1") == kExitConfigError);
    CHECK(shell(bin + " allocate --config /nonexistent.json --output " + out + " > /dev/null 2>&1") ==
          kExitConfigError);
    CHECK(shell(bin + " allocate --config " + preset + " --output " + out + " --set nope=1 > /dev/null 2>&1") ==
          kExitConfigError);
    CHECK(shell(bin + " frobnicate --config " + preset + " --output " + out + " > /dev/null 2>&1") ==
          kExitConfigError);
    // A search window too narrow for the optimum is a runtime failure.
    CHECK(shell(bin + " allocate --config " + preset + " --output " + out +
                " --set allocation.tau_hi=1.2 > /dev/null 2>&1") == kExitRuntimeError);
    // One trial per point: the estimate is 0 or 1 with zero standard error,
    // so the interior closed-form values cannot pass.
    CHECK(shell(bin + " validate --config " + preset + " --output " + out +
                " --set validate.trials=1 --set 'validate.snapshots=[16]' --set 'validate.tau=[2]'"
                " --set 'validate.gamma_e=[0.5]' --set 'validate.n_u=[1]' --set 'validate.rho=[1]'"
                " --set validate.rate_trials=1 > /dev/null 2>&1") == kExitValidationFailed);
    std::remove(out.c_str());
    std::remove(bad.c_str());
}
