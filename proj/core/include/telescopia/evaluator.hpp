// Numerical evaluation of catalog (and generated) identities: exact partials
// at a fixed term count, and to-tolerance evaluation that doubles the term
// count geometrically and extrapolates the checkpoint sequence.
#ifndef TELESCOPIA_EVALUATOR_HPP
#define TELESCOPIA_EVALUATOR_HPP

#include <functional>
#include <optional>

#include "telescopia/catalog.hpp"
#include "telescopia/numerics.hpp"

namespace telescopia {

enum class EvalMode { fixed_n, to_tolerance };

struct EvaluationRequest {
    const Identity* identity = nullptr;
    ParamSet params;
    EvalMode mode = EvalMode::to_tolerance;
    std::optional<std::int64_t> n;  // fixed_n upper limit (infinite entries)
    TolerancePolicy policy;
    bool accelerate = true;
    bool compensated = false;  // Neumaier-compensated accumulation for sums
};

// prefactor * prod_{k=start..N} term(k); left-to-right accumulation.
Scalar partial_product(const Identity& ident, const ParamSet& p, std::int64_t N,
                       double guard_tol = 1e-14);

// prefactor * sum_{k=start..N} term(k).
Scalar partial_sum(const Identity& ident, const ParamSet& p, std::int64_t N,
                   double guard_tol = 1e-14, bool compensated = false);

// Dispatches on the entry's kind.
Scalar partial_value(const Identity& ident, const ParamSet& p, std::int64_t N,
                     double guard_tol = 1e-14, bool compensated = false);

// Evaluates the identity per the request. Finite entries are evaluated at
// their own n_terms (to_tolerance on them is a usage error); infinite entries
// in to_tolerance mode double N from 64 and stop once the estimated tail
// satisfies max(abs_tol, rel_tol*|value|).
ConvergenceResult evaluate(const EvaluationRequest& req);

// Series/product limit helpers shared with the zeta-chain module: accumulate
// term(k) from start, record checkpoints at doubling counts, extrapolate.
ConvergenceResult sum_series_to_limit(
    const std::function<Scalar(std::int64_t)>& term, std::int64_t start,
    const TolerancePolicy& policy, bool accelerate = true,
    bool compensated = false);

ConvergenceResult multiply_series_to_limit(
    const std::function<Scalar(std::int64_t)>& factor, std::int64_t start,
    const TolerancePolicy& policy, bool accelerate = true);

}  // namespace telescopia

#endif
