#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#ifndef TELESCOPIA_CLI_PATH
#error "TELESCOPIA_CLI_PATH must point at the command-line binary"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

// Runs through /bin/sh; stdout is a pipe, so the binary defaults to JSON.
RunResult run(const std::string& args, bool keep_stderr = false) {
    const std::string cmd = std::string(TELESCOPIA_CLI_PATH) + " " + args +
                            (keep_stderr ? " 2>&1" : " 2>/dev/null");
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

RunResult run_env(const std::string& env, const std::string& args) {
    RunResult res;
    const std::string cmd =
        env + " " + std::string(TELESCOPIA_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

}  // namespace

TEST_CASE("list emits json on a pipe and the finite filter is exact") {
    const auto res = run("list --filter finite");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    std::set<std::string> ids;
    for (const auto& row : j) {
        ids.insert(row["id"].get<std::string>());
        CHECK(row["finite"] == true);
    }
    const std::set<std::string> expected{"PROD-FINITE", "PROD-TRIVIAL", "PROD-Z",
                                         "SUM-FINITE",  "SUM-Z",        "SUM-TRIVIAL"};
    CHECK(ids == expected);

    const auto all = run("list");
    CHECK(nlohmann::json::parse(all.out).size() == 14);
}

TEST_CASE("eval converges and reports the limit") {
    const auto res = run("eval PROD-BASIC --s 2");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(j["converged"] == true);
    CHECK(std::abs(j["value"][0].get<double>() - 2.0) < 1e-8);
    CHECK(j["closed_form"][0] == 2.0);
    CHECK(j["mode"] == "to-tolerance");
}

TEST_CASE("eval accepts complex parameters and fixed-n mode") {
    const auto res = run("eval PROD-FINITE --s 1+0.5i --alpha 2 --n 10");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(j["mode"] == "fixed-n");
    CHECK(j["params"]["s"][1] == 0.5);
    const double dre = j["value"][0].get<double>() - j["closed_form"][0].get<double>();
    const double dim = j["value"][1].get<double>() - j["closed_form"][1].get<double>();
    CHECK(std::abs(dre) < 1e-12);
    CHECK(std::abs(dim) < 1e-12);
}

TEST_CASE("exit codes map the error taxonomy") {
    CHECK(run("eval NOPE").exit_code == 2);                      // unknown id
    CHECK(run("eval PROD-PARAM --alpha 0 --n 5").exit_code == 3);  // domain
    CHECK(run("synthesize frac-square --declare saturating:1").exit_code == 4);
    CHECK(run("").exit_code == 64);                              // no subcommand
    CHECK(run("eval").exit_code == 64);                          // missing id
    CHECK(run("list --filter sideways").exit_code == 64);
    // truncated budget in to-tolerance mode is a convergence failure
    CHECK(run("eval SUM-BASIC --s 1 --max-terms 100").exit_code == 1);
}

TEST_CASE("synthesize reports class and scale factor") {
    const auto res = run("synthesize tanh --alpha 1");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(j["preset"] == "tanh");
    CHECK(j["class"].get<std::string>().find("saturating") != std::string::npos);
    CHECK(std::abs(j["beta"][0].get<double>() - 0.51865736036377408) < 1e-12);
    CHECK(j["telescoping_check_n50"].get<double>() < 1e-12);
    CHECK(std::abs(j["infinite_value"][0].get<double>() - 1.0) < 1e-12);
}

TEST_CASE("verify --all passes, is deterministic, and honors csv") {
    const auto a = run("verify --all");
    const auto b = run("verify --all");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["pass"] == true);

    const auto threaded = run("verify --all --threads 4");
    CHECK(threaded.out == a.out);

    const auto csv = run("verify --all --format csv");
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.out.rfind(
              "id,s,alpha,r,n,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,verdict",
              0) == 0);
}

TEST_CASE("verify wants exactly one target") {
    CHECK(run("verify").exit_code == 64);
    CHECK(run("verify --all --id PROD-BASIC").exit_code == 64);
    CHECK(run("verify --id PROD-BASIC --n 50").exit_code == 0);
}

TEST_CASE("sweep consumes a spec file and emits one row per point") {
    const std::string path =
        "/tmp/telescopia_spec_" + std::to_string(getpid()) + ".json";
    {
        std::ofstream f(path);
        f << R"({"identity": "PROD-FINITE",
                 "grid": {"s": [0.5, 1, 2], "alpha": [1, 2], "n": [10, 100]},
                 "tolerance": 1e-12})";
    }
    const auto res = run("sweep --spec " + path + " --format csv");
    std::remove(path.c_str());
    REQUIRE(res.exit_code == 0);
    int lines = 0;
    for (char c : res.out) lines += c == '\n';
    CHECK(lines == 13);  // header + 3*2*2 rows
    CHECK(res.out.find("fail") == std::string::npos);
}

TEST_CASE("sweep reads from stdin when asked") {
    const std::string cmd =
        std::string("echo '{\"identity\": \"SUM-TRIVIAL\", \"grid\": {\"s\": [1], "
                    "\"n\": [5]}}' | ") +
        TELESCOPIA_CLI_PATH + " sweep --spec - 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    CHECK(WEXITSTATUS(status) == 0);
    const auto j = nlohmann::json::parse(out);
    CHECK(j.size() == 1);
    CHECK(j[0]["verdict"] == "pass");
}

TEST_CASE("appendix runs the chained checks") {
    const auto res = run("appendix --b 3 --zeta 2 --equiv-s 0.5");
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(j["all_pass"] == true);
    CHECK(j["zeta"][0]["n"] == 2);
    CHECK(std::abs(j["zeta"][0]["value"].get<double>() - 1.6449340668482264) <
          1e-11);
    CHECK(j["chains"][0]["all_pass"] == true);
}

TEST_CASE("term budget comes from the environment unless the flag overrides") {
    const auto starved =
        run_env("TELESCOPIA_MAX_TERMS=100", "eval SUM-BASIC --s 1");
    CHECK(starved.exit_code == 1);

    const auto overridden = run_env("TELESCOPIA_MAX_TERMS=100",
                                    "eval SUM-BASIC --s 1 --max-terms 1000000");
    CHECK(overridden.exit_code == 0);

    const auto junk = run_env("TELESCOPIA_MAX_TERMS=banana", "eval SUM-BASIC --s 1");
    CHECK(junk.exit_code == 64);
}

TEST_CASE("format flag works before or after the subcommand") {
    const auto after = run("list --format csv --filter finite");
    const auto before = run("--format csv list --filter finite");
    CHECK(after.exit_code == 64);  // list has no csv rendering
    CHECK(before.exit_code == 64);

    const auto human = run("eval SUM-TRIVIAL --s 2 --n 1 --format human");
    REQUIRE(human.exit_code == 0);
    CHECK(human.out.find("0.16666666666666666") != std::string::npos);
}
