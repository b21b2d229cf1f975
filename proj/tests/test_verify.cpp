#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "telescopia/report_io.hpp"
#include "telescopia/verify.hpp"

using telescopia::EvalMode;
using telescopia::find_identity;
using telescopia::ParamSet;
using telescopia::Scalar;
using telescopia::Verdict;

TEST_CASE("verify_one passes an exact fixed-N partial") {
    ParamSet p;
    p.s = {2.0, 0.0};
    const auto rep = telescopia::verify_one(find_identity("PROD-BASIC"), p,
                                            EvalMode::fixed_n, 50, 1e-12);
    CHECK(rep.verdict == Verdict::pass);
    CHECK(rep.abs_err < 1e-13);
    CHECK(rep.n == 50);
}

TEST_CASE("verify_one to-tolerance compares against the limit") {
    ParamSet p;
    p.s = {1.0, 0.0};
    telescopia::TolerancePolicy policy;
    policy.rel_tol = 1e-10;
    const auto rep =
        telescopia::verify_one(find_identity("SUM-BASIC"), p,
                               EvalMode::to_tolerance, std::nullopt, 1e-8, policy);
    CHECK(rep.verdict == Verdict::pass);
    CHECK(rep.converged);
    CHECK(std::abs(rep.expected - Scalar{1.0, 0.0}) == 0.0);
}

TEST_CASE("verify_one flags a truncated budget as failure, not error") {
    ParamSet p;
    p.s = {1.0, 0.0};
    telescopia::TolerancePolicy policy;
    policy.max_terms = 100;
    const auto rep =
        telescopia::verify_one(find_identity("SUM-BASIC"), p,
                               EvalMode::to_tolerance, std::nullopt, 1e-10, policy);
    CHECK(rep.verdict == Verdict::fail);
    CHECK(!rep.converged);
    CHECK(rep.note.find("did not converge") != std::string::npos);
}

TEST_CASE("domain violations and apparent poles are skips, not failures") {
    ParamSet zero_alpha;
    zero_alpha.alpha = {0.0, 0.0};
    const auto guard = telescopia::verify_one(find_identity("PROD-PARAM"),
                                              zero_alpha, EvalMode::fixed_n, 10,
                                              1e-10);
    CHECK(guard.verdict == Verdict::skipped_singularity);
    CHECK(guard.note.find("alpha") != std::string::npos);

    ParamSet pole;  // term denominator vanishes at k=2 while alpha != 0
    pole.s = {1.0, 0.0};
    pole.alpha = {-1.0, 0.0};
    const auto sing = telescopia::verify_one(find_identity("SUM-PARAM"), pole,
                                             EvalMode::fixed_n, 10, 1e-10);
    CHECK(sing.verdict == Verdict::skipped_singularity);
}

TEST_CASE("verify_one propagates usage errors") {
    ParamSet p;
    CHECK_THROWS_AS(telescopia::verify_one(find_identity("PROD-BASIC"), p,
                                           EvalMode::fixed_n, std::nullopt, 1e-10),
                    telescopia::invalid_input);
}

TEST_CASE("sweep order is canonical and thread-count independent") {
    telescopia::SweepSpec spec;
    spec.identity = "PROD-FINITE";
    spec.mode = EvalMode::fixed_n;
    spec.tolerance = 1e-12;
    // deliberately scrambled axis order; canonical order is s, alpha, n
    spec.axes = {{"n", {{10.0, 0.0}, {20.0, 0.0}}},
                 {"s", {{1.0, 0.0}, {2.0, 0.0}}},
                 {"alpha", {{1.0, 0.0}, {3.0, 0.0}}}};

    const auto one = telescopia::sweep(spec);
    telescopia::SweepOptions four;
    four.threads = 4;
    const auto par = telescopia::sweep(spec, four);

    REQUIRE(one.size() == 8);
    REQUIRE(par.size() == 8);
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].params.s == par[i].params.s);
        CHECK(one[i].params.alpha == par[i].params.alpha);
        CHECK(one[i].params.n_terms == par[i].params.n_terms);
        CHECK(one[i].verdict == Verdict::pass);
    }
    // n varies fastest, s slowest
    CHECK(one[0].params.s == Scalar{1.0, 0.0});
    CHECK(one[0].params.alpha == Scalar{1.0, 0.0});
    CHECK(*one[0].params.n_terms == 10);
    CHECK(*one[1].params.n_terms == 20);
    CHECK(one[2].params.alpha == Scalar{3.0, 0.0});
    CHECK(one[4].params.s == Scalar{2.0, 0.0});
}

TEST_CASE("sweep rejects malformed grids") {
    telescopia::SweepSpec spec;
    spec.identity = "PROD-BASIC";
    spec.axes = {{"q", {{1.0, 0.0}}}};
    CHECK_THROWS_AS(telescopia::sweep(spec), telescopia::invalid_input);

    spec.axes = {{"s", {{1.0, 0.0}}}, {"s", {{2.0, 0.0}}}};
    CHECK_THROWS_AS(telescopia::sweep(spec), telescopia::invalid_input);

    spec.axes = {{"s", {}}};
    CHECK_THROWS_AS(telescopia::sweep(spec), telescopia::invalid_input);

    spec.identity = "nope";
    spec.axes = {{"s", {{1.0, 0.0}}}};
    CHECK_THROWS_AS(telescopia::sweep(spec), telescopia::unknown_identifier);
}

TEST_CASE("singular grid points are reported as skips inside a sweep") {
    telescopia::SweepSpec spec;
    spec.identity = "PROD-PARAM";
    spec.mode = EvalMode::fixed_n;
    spec.axes = {{"alpha", {{0.0, 0.0}, {1.0, 0.0}}}, {"n", {{10.0, 0.0}}}};
    const auto reps = telescopia::sweep(spec);
    REQUIRE(reps.size() == 2);
    CHECK(reps[0].verdict == Verdict::skipped_singularity);
    CHECK(reps[1].verdict == Verdict::pass);
}

TEST_CASE("the default regression suite passes and covers everything") {
    const auto result = telescopia::regression_suite();
    CHECK(result.pass);
    CHECK(result.failed_ids.empty());
    CHECK(result.reports.size() >= 200);
    CHECK(result.reports.size() <= 1000);

    std::set<std::string> covered(result.covered_ids.begin(),
                                  result.covered_ids.end());
    for (const auto& e : telescopia::catalog_entries()) {
        CHECK(covered.count(e.id) == 1);
    }
    CHECK(result.covered_presets.size() == 5);

    // transcription findings are reported but never counted as failures
    REQUIRE(result.findings.size() == 5);
    int mismatched = 0;
    for (const auto& f : result.findings) {
        if (!f.matched) {
            ++mismatched;
            CHECK(f.preset == "frac-square");
        }
    }
    CHECK(mismatched == 1);

    int skipped = 0;
    for (const auto& rep : result.reports) {
        if (rep.verdict == Verdict::skipped_singularity) ++skipped;
    }
    CHECK(skipped == 0);
}

TEST_CASE("regression sweeps the finite product over the full real grid") {
    const auto result = telescopia::regression_suite();
    int count = 0;
    for (const auto& rep : result.reports) {
        if (rep.id == "PROD-FINITE" && rep.mode == EvalMode::fixed_n &&
            rep.params.s.imag() == 0.0 && rep.params.alpha.imag() == 0.0) {
            ++count;
        }
    }
    CHECK(count == 48);  // 4 s-values x 4 alpha-values x 3 sizes
}

TEST_CASE("an injected sign defect is caught and attributed") {
    telescopia::RegressionOptions opts;
    opts.mutate_id = "SUM-BASIC";
    opts.mutate = [](telescopia::Identity& e) {
        auto orig = e.term;
        e.term = [orig](std::int64_t k, const ParamSet& p, double g) {
            return -orig(k, p, g);
        };
    };
    const auto result = telescopia::regression_suite(opts);
    CHECK(!result.pass);
    REQUIRE(result.failed_ids.size() == 1);
    CHECK(result.failed_ids[0] == "SUM-BASIC");
}

TEST_CASE("regression is deterministic across thread counts") {
    telescopia::RegressionOptions four;
    four.threads = 4;
    const auto a = telescopia::regression_suite();
    const auto b = telescopia::regression_suite(four);
    REQUIRE(a.reports.size() == b.reports.size());
    CHECK(telescopia::to_json(a) == telescopia::to_json(b));
}

TEST_CASE("scalar text round trips") {
    struct Case {
        const char* text;
        Scalar expected;
    } cases[] = {
        {"2", {2.0, 0.0}},      {"-0.5", {-0.5, 0.0}}, {"1+0.5i", {1.0, 0.5}},
        {"2-i", {2.0, -1.0}},   {"0.5i", {0.0, 0.5}},  {"i", {0.0, 1.0}},
        {"-i", {0.0, -1.0}},    {"1e-3", {1e-3, 0.0}},
    };
    for (const auto& c : cases) {
        const Scalar got = telescopia::parse_scalar(c.text);
        CHECK(got == c.expected);
        CHECK(telescopia::parse_scalar(telescopia::format_scalar(got)) == got);
    }
    CHECK_THROWS_AS(telescopia::parse_scalar("fish"), telescopia::invalid_input);
    CHECK_THROWS_AS(telescopia::parse_scalar("1+2j"), telescopia::invalid_input);
    CHECK(telescopia::format_scalar({2.0, 0.0}) == "2");
    CHECK(telescopia::format_scalar({1.0, -0.5}) == "1-0.5i");
}

TEST_CASE("csv output honors the pinned header and column conventions") {
    CHECK(telescopia::csv_header() ==
          "id,s,alpha,r,n,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,verdict");

    ParamSet p;
    p.z = {2.0, 0.0};
    p.n_terms = 10;
    const auto rep = telescopia::verify_one(find_identity("SUM-Z"), p,
                                            EvalMode::fixed_n, std::nullopt, 1e-10);
    const std::string row = telescopia::to_csv_row(rep);
    CHECK(row.rfind("SUM-Z,2,", 0) == 0);  // z rides in the s column
    CHECK(row.find("pass") != std::string::npos);
}

TEST_CASE("json reports parse and expose the advertised fields") {
    ParamSet p;
    p.s = {2.0, 0.0};
    const auto rep = telescopia::verify_one(find_identity("PROD-BASIC"), p,
                                            EvalMode::fixed_n, 50, 1e-12);
    const auto j = nlohmann::json::parse(telescopia::to_json(rep));
    CHECK(j["id"] == "PROD-BASIC");
    CHECK(j["verdict"] == "pass");
    CHECK(j["n"] == 50);
    CHECK(j["params"]["s"][0] == 2.0);
    CHECK(j["expected"][0] == doctest::Approx(2.0 * 49.0 / 51.0 + 2.0 / 51.0));

    const auto suite = telescopia::regression_suite();
    const auto sj = nlohmann::json::parse(telescopia::to_json(suite));
    CHECK(sj["pass"] == true);
    CHECK(sj["report_count"] == suite.reports.size());
    CHECK(sj["findings"].size() == 5);
}

TEST_CASE("non-finite numbers serialize as json null") {
    telescopia::JsonBuilder b;
    b.num("bad", std::numeric_limits<double>::infinity());
    b.num("good", 1.5);
    const auto j = nlohmann::json::parse(b.build());
    CHECK(j["bad"].is_null());
    CHECK(j["good"] == 1.5);
}

TEST_CASE("sweep specs parse from json with defaults") {
    const auto spec = telescopia::parse_sweep_spec(
        R"({"identity": "PROD-FINITE",
            "grid": {"s": [1, "1+0.5i"], "alpha": [2], "n": [10]}})");
    CHECK(spec.identity == "PROD-FINITE");
    CHECK(spec.mode == EvalMode::fixed_n);
    CHECK(spec.tolerance == 1e-10);
    REQUIRE(spec.axes.size() == 3);

    const auto reps = telescopia::sweep(spec);
    CHECK(reps.size() == 2);
    for (const auto& rep : reps) CHECK(rep.verdict == Verdict::pass);

    const auto tol_spec = telescopia::parse_sweep_spec(
        R"({"identity": "SUM-BASIC", "grid": {"s": [1]},
            "mode": "to-tolerance", "tolerance": 1e-8})");
    CHECK(tol_spec.mode == EvalMode::to_tolerance);
    CHECK(tol_spec.tolerance == 1e-8);

    CHECK_THROWS_AS(telescopia::parse_sweep_spec("{nope"), telescopia::invalid_input);
    CHECK_THROWS_AS(telescopia::parse_sweep_spec(R"({"grid": {}})"),
                    telescopia::invalid_input);
    CHECK_THROWS_AS(telescopia::parse_sweep_spec(
                        R"({"identity": "SUM-BASIC", "mode": "sideways"})"),
                    telescopia::invalid_input);
}
