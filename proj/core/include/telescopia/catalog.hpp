// Catalog of telescoping product and sum identities. Each entry carries its
// closed-form left side, the k-th factor/addend, the constant aggregation
// prefactor, the exact partial value after N terms, and domain guards.
#ifndef TELESCOPIA_CATALOG_HPP
#define TELESCOPIA_CATALOG_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "telescopia/numerics.hpp"

namespace telescopia {

struct ParamSet {
    Scalar s{1.0, 0.0};
    Scalar alpha{2.0, 0.0};
    double r = 2.0;
    std::optional<std::int64_t> n_terms;  // required by finite identities
    Scalar z{0.5, 0.0};
    Scalar b{1.0, 0.0};
};

enum class Kind { product, sum };

struct Identity {
    std::string id;
    Kind kind = Kind::product;
    int start_index = 2;
    bool finite = false;  // finite entries take their upper limit from n_terms
    std::string summary;
    std::string domain;  // human-readable constraint list, "" if none

    // Closed-form target of the full identity.
    std::function<Scalar(const ParamSet&)> lhs;
    // k-th factor (products) or addend (sums); constant prefactors excluded.
    std::function<Scalar(std::int64_t k, const ParamSet&, double guard_tol)> term;
    // Constant prefactor applied once at aggregation.
    std::function<Scalar(const ParamSet&)> prefactor;
    // Exact value of prefactor * (prod|sum)_{start..N} term; null if unknown.
    std::function<Scalar(std::int64_t N, const ParamSet&)> partial_closed_form;
    // Returns the violated constraint ("alpha != 0") or nullopt when the
    // parameters are admissible.
    std::function<std::optional<std::string>(const ParamSet&)> guard;
};

// All catalog entries, fixed order, 14 total (7 products, 7 sums).
const std::vector<Identity>& catalog_entries();

// Lookup by id; throws unknown_identifier.
const Identity& find_identity(const std::string& id);
const Identity* find_identity_if_exists(const std::string& id);

// Throws domain_error when the entry's guard rejects the parameters.
void require_in_domain(const Identity& ident, const ParamSet& p);

}  // namespace telescopia

#endif
