// Numerical verification: single-point checks, deterministic parameter
// sweeps, and the full regression suite (catalog, generated presets,
// transcription cross-checks, and the zeta chain).
#ifndef TELESCOPIA_VERIFY_HPP
#define TELESCOPIA_VERIFY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "telescopia/catalog.hpp"
#include "telescopia/evaluator.hpp"
#include "telescopia/generator.hpp"

namespace telescopia {

enum class Verdict {
    pass,
    fail,
    skipped_singularity,  // guard or apparent-pole hit; not a failure
};

const char* to_string(Verdict v);

struct VerificationReport {
    std::string id;
    ParamSet params;
    EvalMode mode = EvalMode::fixed_n;
    std::optional<std::int64_t> n;
    Scalar expected{};  // closed form (partial or limit, per mode)
    Scalar observed{};  // brute-force evaluation
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tolerance = 0.0;
    bool converged = false;
    Verdict verdict = Verdict::fail;
    std::string note;
};

// Checks one identity at one parameter point.
//  - fixed_n on an infinite identity: brute partial vs exact partial form.
//  - fixed_n on a finite identity: full evaluation vs its closed value
//    (n, when given, sets the term count).
//  - to_tolerance: converged evaluation vs the closed limit.
// Domain violations and apparent singularities yield skipped_singularity.
VerificationReport verify_one(const Identity& ident, ParamSet params,
                              EvalMode mode, std::optional<std::int64_t> n,
                              double tolerance,
                              const TolerancePolicy& policy = {});

// One axis of a sweep grid: parameter name -> values.
using SweepAxis = std::pair<std::string, std::vector<Scalar>>;

struct SweepSpec {
    std::string identity;
    std::vector<SweepAxis> axes;  // keys: s, alpha, r, n, z; any order
    EvalMode mode = EvalMode::fixed_n;
    double tolerance = 1e-10;
};

struct SweepOptions {
    TolerancePolicy policy{};
    int threads = 1;
};

// Cartesian sweep over the spec's grid. Axes are re-ordered canonically
// (s, alpha, r, n, z) with the last present axis varying fastest; output
// order is deterministic regardless of thread count.
std::vector<VerificationReport> sweep(const SweepSpec& spec,
                                      const SweepOptions& options = {});

struct RegressionOptions {
    int threads = 1;
    // Test hook: applied to the named catalog identity before its sweeps run,
    // so an injected defect must surface as a failure.
    std::string mutate_id;
    std::function<void(Identity&)> mutate;
};

struct RegressionResult {
    std::vector<VerificationReport> reports;
    // Transcription-vs-derived diffs are findings, never failures: a shipped
    // formula text is evidence, not ground truth.
    std::vector<CrossCheckReport> findings;
    std::vector<std::string> covered_ids;
    std::vector<std::string> covered_presets;
    std::vector<std::string> failed_ids;
    bool pass = false;
};

RegressionResult regression_suite(const RegressionOptions& options = {});

}  // namespace telescopia

#endif
