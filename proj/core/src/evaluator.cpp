#include "telescopia/evaluator.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace telescopia {
namespace {

// Neumaier-compensated accumulator, applied per component.
struct Compensated {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    double get() const { return sum + carry; }
};

struct Accumulator {
    bool is_product;
    bool compensated;
    Scalar prod{1.0, 0.0};
    Compensated re, im;
    Scalar plain{0.0, 0.0};

    void push(Scalar t) {
        if (is_product) {
            prod *= t;
        } else if (compensated) {
            re.add(t.real());
            im.add(t.imag());
        } else {
            plain += t;
        }
    }
    Scalar get() const {
        if (is_product) return prod;
        if (compensated) return {re.get(), im.get()};
        return plain;
    }
};

std::vector<std::int64_t> checkpoint_targets(std::int64_t max_terms) {
    std::vector<std::int64_t> targets;
    for (std::int64_t c = 64; c < max_terms; c *= 2) targets.push_back(c);
    targets.push_back(max_terms);
    return targets;
}

ConvergenceResult run_to_limit(const std::function<Scalar(std::int64_t)>& term,
                               std::int64_t start, bool is_product,
                               Scalar prefactor, const TolerancePolicy& policy,
                               bool accelerate, bool compensated) {
    if (policy.max_terms < 1) throw invalid_input("max_terms must be positive");
    const std::vector<std::int64_t> targets = checkpoint_targets(policy.max_terms);

    Accumulator acc{is_product, compensated, {1.0, 0.0}, {}, {}, {0.0, 0.0}};
    std::vector<Scalar> partials;
    partials.reserve(targets.size());

    ConvergenceResult res;
    std::int64_t count = 0;
    std::int64_t k = start;
    for (const std::int64_t target : targets) {
        for (; count < target; ++k, ++count) {
            acc.push(term(k));
        }
        const Scalar partial = prefactor * acc.get();
        if (!is_finite(partial)) {
            throw non_finite_error("non-finite partial after " +
                                   std::to_string(count) + " terms");
        }
        partials.push_back(partial);

        res.terms_used = count;
        if (accelerate && partials.size() >= 3) {
            const LimitEstimate le = extrapolate_limit(partials, policy.abs_tol);
            res.value = le.value;
            res.est_error = le.est_error;
        } else if (!accelerate && partials.size() >= 2) {
            res.value = partials.back();
            res.est_error =
                std::abs(partials[partials.size() - 1] - partials[partials.size() - 2]);
        } else {
            res.value = partials.back();
            res.est_error = std::numeric_limits<double>::infinity();
            continue;
        }
        if (res.est_error <=
            std::max(policy.abs_tol, policy.rel_tol * std::abs(res.value))) {
            res.converged = true;
            break;
        }
    }
    return res;
}

}  // namespace

Scalar partial_product(const Identity& ident, const ParamSet& p, std::int64_t N,
                       double guard_tol) {
    if (N < ident.start_index) {
        throw invalid_input(ident.id + ": N must be >= start index " +
                            std::to_string(ident.start_index));
    }
    Scalar acc{1.0, 0.0};
    for (std::int64_t k = ident.start_index; k <= N; ++k) {
        acc *= ident.term(k, p, guard_tol);
    }
    acc *= ident.prefactor(p);
    if (!is_finite(acc)) {
        throw non_finite_error(ident.id + ": non-finite partial product");
    }
    return acc;
}

Scalar partial_sum(const Identity& ident, const ParamSet& p, std::int64_t N,
                   double guard_tol, bool compensated) {
    if (N < ident.start_index) {
        throw invalid_input(ident.id + ": N must be >= start index " +
                            std::to_string(ident.start_index));
    }
    Accumulator acc{false, compensated, {1.0, 0.0}, {}, {}, {0.0, 0.0}};
    for (std::int64_t k = ident.start_index; k <= N; ++k) {
        acc.push(ident.term(k, p, guard_tol));
    }
    const Scalar out = ident.prefactor(p) * acc.get();
    if (!is_finite(out)) {
        throw non_finite_error(ident.id + ": non-finite partial sum");
    }
    return out;
}

Scalar partial_value(const Identity& ident, const ParamSet& p, std::int64_t N,
                     double guard_tol, bool compensated) {
    return ident.kind == Kind::product
               ? partial_product(ident, p, N, guard_tol)
               : partial_sum(ident, p, N, guard_tol, compensated);
}

ConvergenceResult evaluate(const EvaluationRequest& req) {
    if (!req.identity) throw invalid_input("evaluate: null identity");
    const Identity& ident = *req.identity;
    const ParamSet& p = req.params;
    require_in_domain(ident, p);

    if (ident.finite) {
        if (req.mode == EvalMode::to_tolerance) {
            throw invalid_input(ident.id +
                                ": finite identity evaluates in fixed-N mode only");
        }
        const std::int64_t N = *p.n_terms;
        if (req.n && *req.n != N) {
            throw invalid_input(ident.id +
                                ": finite identity evaluates at its own n_terms");
        }
        ConvergenceResult res;
        res.value = partial_value(ident, p, N, req.policy.abs_tol, req.compensated);
        res.terms_used = N - ident.start_index + 1;
        res.est_error = 0.0;
        res.converged = true;
        return res;
    }

    if (req.mode == EvalMode::fixed_n) {
        if (!req.n) throw invalid_input("fixed-N mode requires n");
        const std::int64_t N = *req.n;
        if (N < ident.start_index) {
            throw invalid_input(ident.id + ": N must be >= start index");
        }
        ConvergenceResult res;
        const Scalar value =
            partial_value(ident, p, N, req.policy.abs_tol, req.compensated);
        res.value = value;
        res.terms_used = N - ident.start_index + 1;
        if (N > ident.start_index) {
            const Scalar prev =
                partial_value(ident, p, N - 1, req.policy.abs_tol, req.compensated);
            res.est_error = std::abs(value - prev);
        } else {
            res.est_error = std::numeric_limits<double>::infinity();
        }
        res.converged =
            res.est_error <=
            std::max(req.policy.abs_tol, req.policy.rel_tol * std::abs(value));
        return res;
    }

    const double guard_tol = req.policy.abs_tol;
    const Scalar prefactor = ident.prefactor(p);
    return run_to_limit(
        [&](std::int64_t k) { return ident.term(k, p, guard_tol); },
        ident.start_index, ident.kind == Kind::product, prefactor, req.policy,
        req.accelerate, req.compensated);
}

ConvergenceResult sum_series_to_limit(
    const std::function<Scalar(std::int64_t)>& term, std::int64_t start,
    const TolerancePolicy& policy, bool accelerate, bool compensated) {
    return run_to_limit(term, start, false, {1.0, 0.0}, policy, accelerate,
                        compensated);
}

ConvergenceResult multiply_series_to_limit(
    const std::function<Scalar(std::int64_t)>& factor, std::int64_t start,
    const TolerancePolicy& policy, bool accelerate) {
    return run_to_limit(factor, start, true, {1.0, 0.0}, policy, accelerate,
                        false);
}

}  // namespace telescopia
