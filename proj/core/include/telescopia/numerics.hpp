// Scalar arithmetic, tolerance policy, sequence acceleration and tail
// estimation shared by every evaluation path in the library.
#ifndef TELESCOPIA_NUMERICS_HPP
#define TELESCOPIA_NUMERICS_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace telescopia {

// All parameters and partial values are complex; real inputs ride along with
// a zero imaginary part.
using Scalar = std::complex<double>;

struct TolerancePolicy {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::int64_t max_terms = 1'000'000;
};

struct ConvergenceResult {
    Scalar value{};
    std::int64_t terms_used = 0;
    double est_error = 0.0;
    bool converged = false;
};

// ---- error taxonomy ------------------------------------------------------

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter violates an identity's domain constraint (e.g. "alpha != 0").
struct domain_error : error {
    domain_error(std::string constraint_, const std::string& msg)
        : error(msg), constraint(std::move(constraint_)) {}
    std::string constraint;
};

// A term denominator collapsed below the guard threshold. The pole is
// apparent (it cancels in the telescoped form) but a raw factor cannot be
// evaluated through it, so the offending index is reported instead.
struct singularity_error : error {
    singularity_error(std::int64_t k_, std::string factor_, const std::string& msg)
        : error(msg), k(k_), factor(std::move(factor_)) {}
    std::int64_t k;
    std::string factor;
};

struct non_finite_error : error {
    using error::error;
};

struct invalid_input : error {
    using error::error;
};

struct unknown_identifier : error {
    unknown_identifier(std::string id_, const std::string& msg)
        : error(msg), id(std::move(id_)) {}
    std::string id;
};

// Generator function fails screening (oscillates, changes sign, or grows in
// a way outside the two supported asymptotic classes).
struct unsupported_function : error {
    using error::error;
};

// Empirical classification disagrees with the declared asymptotic class.
struct classification_conflict : error {
    using error::error;
};

// Requested operation needs data the object does not carry
// (e.g. an analytic derivative).
struct capability_error : error {
    using error::error;
};

// ---- sequence acceleration ----------------------------------------------

struct AcceleratedSequence {
    std::vector<Scalar> values;
    // true where the Aitken denominator underflowed and the raw entry was
    // passed through unchanged
    std::vector<bool> passthrough;
};

// Aitken delta-squared transform of a partial-value sequence. Output has
// length n-2. Windows whose second difference falls below abs_tol are passed
// through (latest raw value) and flagged. Exact on geometric sequences.
AcceleratedSequence aitken_accelerate(std::span<const Scalar> partials,
                                      double abs_tol = 1e-14);

enum class TailModel {
    last_delta,
    one_over_n_extrapolation,
};

// Heuristic estimate of |limit - partials.back()| for unit-spaced partials.
// last_delta uses the final increment; the one-over-n model fits e_n ~ C/n
// to the last two increments. Requires at least three entries.
double estimate_tail(std::span<const Scalar> partials, TailModel model);

struct LimitEstimate {
    Scalar value{};
    double est_error = 0.0;
};

// Iterated Aitken extrapolation of a checkpoint sequence. Returns the
// candidate with the smallest trailing disagreement across depths.
LimitEstimate extrapolate_limit(std::span<const Scalar> checkpoints,
                                double abs_tol = 1e-14);

// Division with an apparent-singularity guard: |den| < guard_tol throws
// singularity_error tagged with the term index and factor description.
Scalar checked_div(Scalar num, Scalar den, std::int64_t k, const char* factor,
                   double guard_tol);

bool is_finite(Scalar v);

}  // namespace telescopia

#endif
