#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "telescopia/catalog.hpp"
#include "telescopia/evaluator.hpp"

using telescopia::EvalMode;
using telescopia::EvaluationRequest;
using telescopia::find_identity;
using telescopia::ParamSet;
using telescopia::Scalar;

namespace {

double dist(Scalar a, Scalar b) { return std::abs(a - b); }
double dist(Scalar a, double b) { return std::abs(a - Scalar{b, 0.0}); }

}  // namespace

TEST_CASE("brute partials track the closed form across a parameter grid") {
    const auto& e = find_identity("PROD-BASIC");
    for (double s : {0.5, 1.0, 2.0, 3.0}) {
        for (std::int64_t N : {std::int64_t{10}, std::int64_t{100}}) {
            ParamSet p;
            p.s = {s, 0.0};
            const Scalar brute = telescopia::partial_product(e, p, N);
            const Scalar closed = e.partial_closed_form(N, p);
            CHECK(dist(brute, closed) < 1e-13 * std::abs(closed));
        }
    }
}

TEST_CASE("partial_sum matches its frozen value") {
    const auto& e = find_identity("SUM-BASIC");
    ParamSet p;
    p.s = {1.0, 0.0};
    CHECK(dist(telescopia::partial_sum(e, p, 10), 9.0 / 11.0) < 1e-15);
}

TEST_CASE("compensated accumulation stays exact over 1e5 terms") {
    const auto& e = find_identity("SUM-TRIVIAL");
    ParamSet p;
    p.s = {1.0, 0.0};
    p.n_terms = 100000;
    const double closed = 100000.0 / (1.0 * (1.0 + 100000.0));
    const Scalar got = telescopia::partial_sum(e, p, 100000, 1e-14, true);
    CHECK(dist(got, closed) < 1e-14);
}

TEST_CASE("to-tolerance evaluation converges to the limit") {
    EvaluationRequest req;
    req.identity = &find_identity("PROD-BASIC");
    req.params.s = {2.0, 0.0};
    req.mode = EvalMode::to_tolerance;
    req.policy.rel_tol = 1e-10;
    const auto res = telescopia::evaluate(req);
    CHECK(res.converged);
    CHECK(res.terms_used <= 100000);
    CHECK(dist(res.value, 2.0) < 1e-9);
}

TEST_CASE("acceleration reaches tolerance far inside the budget") {
    EvaluationRequest req;
    req.identity = &find_identity("SUM-BASIC");
    req.params.s = {0.5, 0.0};
    req.mode = EvalMode::to_tolerance;
    req.policy.rel_tol = 1e-10;
    req.compensated = true;
    const auto res = telescopia::evaluate(req);
    CHECK(res.converged);
    CHECK(res.terms_used < 1000000);
    CHECK(dist(res.value, 2.0) < 1e-9);  // 1/s
}

TEST_CASE("first convergence check happens at the third checkpoint") {
    EvaluationRequest req;
    req.identity = &find_identity("SUM-BASIC");
    req.params.s = {1.0, 0.0};
    req.mode = EvalMode::to_tolerance;
    req.policy.rel_tol = 1.0;  // anything passes once an estimate exists
    const auto res = telescopia::evaluate(req);
    CHECK(res.converged);
    CHECK(res.terms_used == 256);
}

TEST_CASE("exhausted budget reports honest non-convergence") {
    EvaluationRequest req;
    req.identity = &find_identity("SUM-BASIC");
    req.params.s = {1.0, 0.0};
    req.mode = EvalMode::to_tolerance;
    req.policy.max_terms = 100;  // only two checkpoints, no extrapolation
    const auto res = telescopia::evaluate(req);
    CHECK(!res.converged);
    CHECK(res.terms_used == 100);
    CHECK(std::isinf(res.est_error));
}

TEST_CASE("mode misuse raises invalid_input") {
    EvaluationRequest finite_to_tol;
    finite_to_tol.identity = &find_identity("PROD-FINITE");
    finite_to_tol.params.alpha = {1.0, 0.0};
    finite_to_tol.params.n_terms = 10;
    finite_to_tol.mode = EvalMode::to_tolerance;
    CHECK_THROWS_AS(telescopia::evaluate(finite_to_tol), telescopia::invalid_input);

    EvaluationRequest no_n;
    no_n.identity = &find_identity("PROD-BASIC");
    no_n.mode = EvalMode::fixed_n;
    CHECK_THROWS_AS(telescopia::evaluate(no_n), telescopia::invalid_input);

    EvaluationRequest clash;
    clash.identity = &find_identity("PROD-FINITE");
    clash.params.alpha = {1.0, 0.0};
    clash.params.n_terms = 10;
    clash.mode = EvalMode::fixed_n;
    clash.n = 20;  // disagrees with n_terms
    CHECK_THROWS_AS(telescopia::evaluate(clash), telescopia::invalid_input);
}

TEST_CASE("domain violations surface before any term is evaluated") {
    EvaluationRequest req;
    req.identity = &find_identity("PROD-PARAM");
    req.params.alpha = {0.0, 0.0};
    req.mode = EvalMode::fixed_n;
    req.n = 10;
    CHECK_THROWS_AS(telescopia::evaluate(req), telescopia::domain_error);
}

TEST_CASE("overflowing factors raise non_finite_error instead of inf") {
    const auto& e = find_identity("PROD-POWER");
    ParamSet p;
    p.s = {1e200, 0.0};
    p.alpha = {1.0, 0.0};
    p.r = 3.0;
    CHECK_THROWS_AS(telescopia::partial_product(e, p, 10),
                    telescopia::non_finite_error);
}

TEST_CASE("fixed-N evaluation of an infinite identity returns the exact partial") {
    EvaluationRequest req;
    req.identity = &find_identity("SUM-PARAM");
    req.params.s = {2.0, 0.0};
    req.params.alpha = {1.0, 0.0};
    req.mode = EvalMode::fixed_n;
    req.n = 10;
    const auto res = telescopia::evaluate(req);
    CHECK(res.terms_used == 9);  // k = 2..10
    CHECK(dist(res.value, 18.0 / 19.0) < 1e-14);
}

TEST_CASE("sum_series_to_limit resolves a classic telescoping series") {
    // sum_{k>=1} 1/(k(k+1)) = 1
    telescopia::TolerancePolicy policy;
    policy.rel_tol = 1e-12;
    const auto res = telescopia::sum_series_to_limit(
        [](std::int64_t k) {
            const double kd = static_cast<double>(k);
            return Scalar{1.0 / (kd * (kd + 1.0)), 0.0};
        },
        1, policy, true, true);
    CHECK(res.converged);
    CHECK(dist(res.value, 1.0) < 1e-11);
}

TEST_CASE("multiply_series_to_limit resolves a classic telescoping product") {
    // prod_{k>=2} (1 - 1/k^2) = 1/2
    telescopia::TolerancePolicy policy;
    policy.rel_tol = 1e-10;
    const auto res = telescopia::multiply_series_to_limit(
        [](std::int64_t k) {
            const double kd = static_cast<double>(k);
            return Scalar{1.0 - 1.0 / (kd * kd), 0.0};
        },
        2, policy, true);
    CHECK(res.converged);
    CHECK(dist(res.value, 0.5) < 1e-10);
}

TEST_CASE("unaccelerated evaluation needs far more terms than accelerated") {
    EvaluationRequest base;
    base.identity = &find_identity("SUM-BASIC");
    base.params.s = {2.0, 0.0};
    base.mode = EvalMode::to_tolerance;
    base.policy.rel_tol = 1e-6;
    base.compensated = true;

    EvaluationRequest raw = base;
    raw.accelerate = false;

    const auto fast = telescopia::evaluate(base);
    const auto slow = telescopia::evaluate(raw);
    CHECK(fast.converged);
    CHECK(slow.converged);
    CHECK(fast.terms_used * 4 <= slow.terms_used);
    CHECK(dist(fast.value, 0.5) < 1e-6);
}
