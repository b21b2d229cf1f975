// Synthesis of new telescoping product identities from a user-supplied
// function f: classification of its growth, solving the scale factor that
// pins the product to a closed value, and log-derivative sum identities
// derived from the product (with respect to alpha or s).
#ifndef TELESCOPIA_GENERATOR_HPP
#define TELESCOPIA_GENERATOR_HPP

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "telescopia/catalog.hpp"
#include "telescopia/numerics.hpp"

namespace telescopia {

// lim f(sN)/f(N) = C0 * s^r as N -> infinity.
struct PowerLaw {
    double C0 = 1.0;
    double r = 1.0;
};

// f(N) -> L as N -> infinity.
struct Saturating {
    double L = 1.0;
};

using AsymptoticClass = std::variant<PowerLaw, Saturating>;

struct GeneratorFunction {
    std::string name;
    std::function<Scalar(Scalar)> eval;
    std::function<Scalar(Scalar)> deriv;  // null: finite differences only
    std::optional<AsymptoticClass> declared;
};

struct ClassifyOptions {
    double s_probe = 2.0;
    std::vector<double> probes{1e3, 1e4, 1e5, 1e6};
    double r_stability = 1e-3;  // last two r estimates must agree this closely
};

// Screens f on [1, 1e6] (real-positive, single-signed), detects saturation,
// otherwise fits the power-law exponent at the probe scales. Throws
// unsupported_function when neither class fits and classification_conflict
// when the empirical class contradicts f.declared.
AsymptoticClass classify(const GeneratorFunction& f,
                         const ClassifyOptions& opts = {});

// Scale factor beta making the infinite product equal s^r (power-law f) or 1
// (saturating f).
Scalar solve_scale(const GeneratorFunction& f, Scalar alpha,
                   const AsymptoticClass& cls);

struct GeneratedIdentity {
    GeneratorFunction f;
    Scalar alpha{};
    Scalar beta{};
    AsymptoticClass cls;
    int start_index = 2;

    // f(k)(f(s(k-1))+alpha) / (f(k+1)(f(s(k-2))+alpha))
    Scalar term(std::int64_t k, Scalar s, double guard_tol = 1e-14) const;
    // beta f(2)(f(s(N-1))+alpha) / ((f(0)+alpha) f(N+1))
    Scalar partial_closed_form(std::int64_t N, Scalar s) const;
    // Closed value of the full product for the stored beta.
    Scalar infinite_value(Scalar s) const;
};

// classify + solve_scale + assembly.
GeneratedIdentity synthesize(const GeneratorFunction& f, Scalar alpha,
                             const ClassifyOptions& opts = {});

enum class DeriveVariant { wrt_alpha, wrt_s };

// Log-derivative sum identity of a generated product.
struct DerivedSum {
    DeriveVariant variant = DeriveVariant::wrt_alpha;
    bool requires_deriv = false;
    std::function<Scalar(std::int64_t k, Scalar s, Scalar alpha)> term;
    std::function<Scalar(Scalar s, Scalar alpha)> lhs;
    // Exact telescoped value of sum_{k=2..N} term.
    std::function<Scalar(std::int64_t N, Scalar s, Scalar alpha)> partial_closed_form;
};

DerivedSum derive_sum(const GeneratedIdentity& gen, DeriveVariant variant,
                      bool use_finite_difference = false);

// ---- presets --------------------------------------------------------------

// Each preset bundles the generator function with the hand-derived sum term
// shipped alongside it, kept only as a cross-check target (the derived term
// from derive_sum is the source of truth).
struct Preset {
    GeneratorFunction f;
    DeriveVariant transcribed_variant = DeriveVariant::wrt_s;
    // Full k-th addend of the hand-derived sum identity, transcribed verbatim.
    std::function<Scalar(std::int64_t k, Scalar s, Scalar alpha)> transcribed_term;
};

// frac-square, tanh, x-tanh, x-arctan, x-exp.
const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);
const Preset* find_preset_if_exists(const std::string& name);

// ---- transcription cross-checks --------------------------------------------

struct CrossCheckPoint {
    std::int64_t k = 0;
    Scalar s{}, alpha{};
    Scalar transcribed{}, derived{};
    double abs_diff = 0.0;
    double rel_diff = 0.0;
};

struct CrossCheckReport {
    std::string preset;
    std::string variant;  // "wrt-s" or "wrt-alpha"
    std::vector<CrossCheckPoint> points;
    double max_abs_diff = 0.0;
    double max_rel_diff = 0.0;
    CrossCheckPoint worst;
    bool matched = false;  // max_rel_diff <= threshold
    double threshold = 1e-10;
};

CrossCheckPoint cross_check_point(const Preset& preset, std::int64_t k, Scalar s,
                                  Scalar alpha);

struct CrossCheckGrid {
    std::vector<Scalar> s_values{{0.5, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
    std::vector<Scalar> alpha_values{{1.0, 0.0}, {2.0, 0.0}};
    std::vector<std::int64_t> k_values{2, 3, 4, 5, 6};
    double threshold = 1e-10;
};

CrossCheckReport cross_check_suite(const Preset& preset,
                                   const CrossCheckGrid& grid = {});
std::vector<CrossCheckReport> cross_check_all(const CrossCheckGrid& grid = {});

// Wraps a generated product as a catalog-style descriptor so the evaluator
// and verification harness can consume it. The ParamSet's s is used; alpha
// is fixed at synthesis time.
Identity as_identity(const GeneratedIdentity& gen, const std::string& id);
// Same for a derived sum (term depends on s and the stored alpha).
Identity as_identity(const DerivedSum& sum, Scalar alpha, const std::string& id);

}  // namespace telescopia

#endif
