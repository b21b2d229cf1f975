#include "telescopia/catalog.hpp"

#include <cmath>

namespace telescopia {
namespace {

const Scalar kOne{1.0, 0.0};

Scalar cpow(Scalar base, double e) { return std::pow(base, e); }
double rpow(double base, double e) { return std::pow(base, e); }

bool is_zero(Scalar v) { return std::abs(v) == 0.0; }

std::int64_t finite_n(const ParamSet& p) {
    if (!p.n_terms) throw invalid_input("finite identity requires n_terms");
    return *p.n_terms;
}

std::optional<std::string> no_guard(const ParamSet&) { return std::nullopt; }

std::function<std::optional<std::string>(const ParamSet&)> guards(
    bool need_s, bool need_alpha, bool positive_r, int min_n) {
    return [=](const ParamSet& p) -> std::optional<std::string> {
        if (need_s && is_zero(p.s)) return "s != 0";
        if (need_alpha && is_zero(p.alpha)) return "alpha != 0";
        if (positive_r && !(p.r > 0.0)) return "r > 0";
        if (min_n > 0) {
            if (!p.n_terms) return "n required";
            if (*p.n_terms < min_n) return "n >= " + std::to_string(min_n);
        }
        return std::nullopt;
    };
}

Scalar unit_prefactor(const ParamSet&) { return kOne; }

std::vector<Identity> build_catalog() {
    std::vector<Identity> c;

    // -- products ----------------------------------------------------------

    {
        Identity e;
        e.id = "PROD-BASIC";
        e.kind = Kind::product;
        e.start_index = 2;
        e.summary = "prod_{k>=2} k(s(k-1)+2)/((k+1)(s(k-2)+2)) = s";
        e.domain = "";
        e.lhs = [](const ParamSet& p) { return p.s; };
        e.term = [](std::int64_t k, const ParamSet& p, double g) {
            const double kd = static_cast<double>(k);
            const Scalar num = kd * (p.s * (kd - 1.0) + 2.0);
            const Scalar den = (kd + 1.0) * (p.s * (kd - 2.0) + 2.0);
            return checked_div(num, den, k, "(k+1)(s(k-2)+2)", g);
        };
        e.prefactor = unit_prefactor;
        e.partial_closed_form = [](std::int64_t N, const ParamSet& p) {
            const double Nd = static_cast<double>(N);
            return (p.s * (Nd - 1.0) + 2.0) / (Nd + 1.0);
        };
        e.guard = no_guard;
        c.push_back(std::move(e));
    }

    {
        Identity e;
        e.id = "PROD-PARAM";
        e.kind = Kind::product;
        e.start_index = 2;
        e.summary = "(alpha/2) prod_{k>=2} k(s(k-1)+alpha)/((k+1)(s(k-2)+alpha)) = s";
        e.domain = "alpha != 0";
        e.lhs = [](const ParamSet& p) { return p.s; };
        e.term = [](std::int64_t k, const ParamSet& p, double g) {
            const double kd = static_cast<double>(k);
            const Scalar num = kd * (p.s * (kd - 1.0) + p.alpha);
            const Scalar den = (kd + 1.0) * (p.s * (kd - 2.0) + p.alpha);
            return checked_div(num, den, k, "(k+1)(s(k-2)+alpha)", g);
        };
        e.prefactor = [](const ParamSet& p) { return p.alpha / 2.0; };
        e.partial_closed_form = [](std::int64_t N, const ParamSet& p) {
            const double Nd = static_cast<double>(N);
            return (p.s * (Nd - 1.0) + p.alpha) / (Nd + 1.0);
        };
        e.guard = guards(false, true, false, 0);
        c.push_back(std::move(e));
    }

    {
        Identity e;
        e.id = "PROD-POWER-RATIO";
        e.kind = Kind::product;
        e.start_index = 2;
        e.summary =
            "prod of k^(r-1), (s(k-1)+alpha)^r and (s^r(k-2)+alpha) ratios "
            "= (2/alpha)^(r-1)";
        e.domain = "s != 0, alpha != 0";
        e.lhs = [](const ParamSet& p) { return cpow(2.0 / p.alpha, p.r - 1.0); };
        e.term = [](std::int64_t k, const ParamSet& p, double g) {
            const double kd = static_cast<double>(k);
            const Scalar sr = cpow(p.s, p.r);
            const Scalar b_num = p.s * (kd - 1.0) + p.alpha;
            const Scalar b_den = p.s * (kd - 2.0) + p.alpha;
            if (std::abs(b_den) < g) {
                throw singularity_error(k, "(s(k-2)+alpha)",
                                        "apparent singularity at k=" +
                                            std::to_string(k));
            }
            const Scalar num =
                rpow(kd, p.r - 1.0) * cpow(b_num, p.r) * (sr * (kd - 2.0) + p.alpha);
            const Scalar den =
                rpow(kd + 1.0, p.r - 1.0) * (sr * (kd - 1.0) + p.alpha) * cpow(b_den, p.r);
            return checked_div(num, den, k, "(s^r(k-1)+alpha)(s(k-2)+alpha)^r", g);
        };
        e.prefactor = unit_prefactor;
        e.partial_closed_form = [](std::int64_t N, const ParamSet& p) {
            // Each factor family telescopes by exact value cancellation, so the
            // pow calls here match the ones made inside term().
            const double Nd = static_cast<double>(N);
            const Scalar sr = cpow(p.s, p.r);
            return rpow(2.0, p.r - 1.0) / rpow(Nd + 1.0, p.r - 1.0) *
                   cpow(p.s * (Nd - 1.0) + p.alpha, p.r) / cpow(p.alpha, p.r) *
                   p.alpha / (sr * (Nd - 1.0) + p.alpha);
        };
        e.guard = guards(true, true, false, 0);
        c.push_back(std::move(e));
    }

    {
        Identity e;
        e.id = "PROD-FINITE";
        e.kind = Kind::product;
        e.start_index = 2;
        e.finite = true;
        e.summary =
            "(alpha/2) prod_{k=2..N} k(s(k-1)+alpha)/((k+1)(s(k-2)+alpha)) "
            "= ((N-1)s+alpha)/(N+1)";
        e.domain = "alpha != 0, n >= 2";
        e.lhs = [](const ParamSet& p) {
            const double Nd = static_cast<double>(finite_n(p));
            return ((Nd - 1.0) * p.s + p.alpha) / (Nd + 1.0);
        };
        e.term = [](std::int64_t k, const ParamSet& p, double g) {
            const double kd = static_cast<double>(k);
            const Scalar num = kd * (p.s * (kd - 1.0) + p.alpha);
            const Scalar den = (kd + 1.0) * (p.s * (kd - 2.0) + p.alpha);
            return checked_div(num, den, k, "(k+1)(s(k-2)+alpha)", g);
        };
        e.prefactor = [](const ParamSet& p) { return p.alpha / 2.0; };
        e.partial_closed_form = [](std::int64_t N, const ParamSet& p) {
            const double Nd = static_cast<double>(N);
            return (p.s * (Nd - 1.0) + p.alpha) / (Nd + 1.0);
        };
        e.guard = guards(false, true, false, 2);
        c.push_back(std::move(e));
    }

    {
        Identity e;
        e.id = "PROD-TRIVIAL";
        e.kind = Kind::product;
        e.start_index = 1;
        e.finite = true;
        e.summary = "prod_{j=1..N} (1 - 1/(s+j)) = s/(s+N)";
        e.domain = "n >= 1";
        e.lhs = [](const ParamSet& p) {
            const double Nd = static_cast<double>(finite_n(p));
            return p.s / (p.s + Nd);
        };
        e.term = [](std::int64_t k, const ParamSet& p, double g) {
            const double kd = static_cast<double>(k);
            return kOne - checked_div(kOne, p.s + kd, k, "(s+j)", g);
        };
        e.prefactor = unit_prefactor;
        e.partial_closed_form = [](std::int64_t N, const ParamSet& p) {
            const double Nd = static_cast<double>(N);
            return p.s / (p.s + Nd);
        };
        e.guard = guards(false, false, false, 1);
        c.push_back(std::move(e));
    }

    {
        Identity e;
        e.id = "PROD-Z";
        e.kind = Kind::product;
        e.start_index = 1;
        e.finite = true;
        e.summary =
            "prod_{j=1..N} (j(1-z)+z(N+1)-1)/(j(1-z)+Nz) = z  (z = s/(s+N))";
        e.domain = "z != 0, z != 1, n >= 1";
        e.lhs = [](const ParamSet& p) {
            finite_n(p);
            return p.z;
        };
        e.term = [](std::int64_t k, const ParamSet& p, double g) {
            const double jd = static_cast<double>(k);
            const double Nd = static_cast<double>(finite_n(p));
            const Scalar num = jd * (kOne - p.z) + p.z * (Nd + 1.0) - 1.0;
            const Scalar den = jd * (kOne - p.z) + Nd * p.z;
            return checked_div(num, den, k, "(j(1-z)+Nz)", g);
        };
        e.prefactor = unit_prefactor;
        e.partial_closed_form = [](std::int64_t M, const ParamSet& p) {
            const double Md = static_cast<double>(M);
            const double Nd = static_cast<double>(finite_n(p));
            return Nd * p.z / (Md * (kOne - p.z) + Nd * p.z);
        };
        e.guard = [](const ParamSet& p) -> std::optional<std::string> {
            if (is_zero(p.z)) return "z != 0";
            if (std::abs(p.z - kOne) == 0.0) return "z != 1";
            if (!p.n_terms) return "n required";
            if (*p.n_terms < 1) return "n >= 1";
            return std::nullopt;
        };
        c.push_back(std::move(e));
    }

    {
        Identity e;
        e.id = "PROD-POWER";
        e.kind = Kind::product;
        e.start_index = 2;
        e.summary =
            "(alpha/2^r) prod_{k>=2} k^r(s^r(k-1)^r+alpha)/"
            "((k+1)^r(s^r(k-2)^r+alpha)) = s^r";
        e.domain = "s != 0, alpha != 0, r > 0";
        e.lhs = [](const ParamSet& p) { return cpow(p.s, p.r); };
        e.term = [](std::int64_t k, const ParamSet& p, double g) {
            const double kd = static_cast<double>(k);
            const Scalar sr = cpow(p.s, p.r);
            const Scalar num =
                rpow(kd, p.r) * (sr * rpow(kd - 1.0, p.r) + p.alpha);
            const Scalar den =
                rpow(kd + 1.0, p.r) * (sr * rpow(kd - 2.0, p.r) + p.alpha);
            return checked_div(num, den, k, "(k+1)^r(s^r(k-2)^r+alpha)", g);
        };
        e.prefactor = [](const ParamSet& p) { return p.alpha / rpow(2.0, p.r); };
        e.partial_closed_form = [](std::int64_t N, const ParamSet& p) {
            const double Nd = static_cast<double>(N);
            const Scalar sr = cpow(p.s, p.r);
            return (sr * rpow(Nd - 1.0, p.r) + p.alpha) / rpow(Nd + 1.0, p.r);
        };
        e.guard = guards(true, true, true, 0);
        c.push_back(std::move(e));
    }

    // -- sums ---------------------------------------------------------------

    {
        Identity e;
        e.id = "SUM-BASIC";
        e.kind = Kind::sum;
        e.start_index = 2;
        e.summary = "2 sum_{k>=2} 1/((s(k-1)+2)(s(k-2)+2)) = 1/s";
        e.domain = "s != 0";
        e.lhs = [](const ParamSet& p) { return kOne / p.s; };
        e.term = [](std::int64_t k, const ParamSet& p, double g) {
            const double kd = static_cast<double>(k);
            const Scalar d1 = p.s * (kd - 1.0) + 2.0;
            const Scalar d2 = p.s * (kd - 2.0) + 2.0;
            if (std::abs(d1) < g || std::abs(d2) < g) {
                throw singularity_error(k, "(s(k-1)+2)(s(k-2)+2)",
                                        "apparent singularity at k=" +
                                            std::to_string(k));
            }
            return kOne / (d1 * d2);
        };
        e.prefactor = [](const ParamSet&) { return Scalar{2.0, 0.0}; };
        e.partial_closed_form = [](std::int64_t N, const ParamSet& p) {
            const double Nd = static_cast<double>(N);
            return (kOne / p.s) * (kOne - 2.0 / (p.s * (Nd - 1.0) + 2.0));
        };
        e.guard = guards(true, false, false, 0);
        c.push_back(std::move(e));
    }

    {
        Identity e;
        e.id = "SUM-PARAM";
        e.kind = Kind::sum;
        e.start_index = 2;
        e.summary = "sum_{k>=2} s/((s(k-1)+alpha)(s(k-2)+alpha)) = 1/alpha";
        e.domain = "s != 0, alpha != 0";
        e.lhs = [](const ParamSet& p) { return kOne / p.alpha; };
        e.term = [](std::int64_t k, const ParamSet& p, double g) {
            const double kd = static_cast<double>(k);
            const Scalar d1 = p.s * (kd - 1.0) + p.alpha;
            const Scalar d2 = p.s * (kd - 2.0) + p.alpha;
            if (std::abs(d1) < g || std::abs(d2) < g) {
                throw singularity_error(k, "(s(k-1)+alpha)(s(k-2)+alpha)",
                                        "apparent singularity at k=" +
                                            std::to_string(k));
            }
            return p.s / (d1 * d2);
        };
        e.prefactor = unit_prefactor;
        e.partial_closed_form = [](std::int64_t N, const ParamSet& p) {
            const double Nd = static_cast<double>(N);
            return kOne / p.alpha - kOne / (p.s * (Nd - 1.0) + p.alpha);
        };
        e.guard = guards(true, true, false, 0);
        c.push_back(std::move(e));
    }

    {
        Identity e;
        e.id = "SUM-POWER-RATIO";
        e.kind = Kind::sum;
        e.start_index = 2;
        e.summary =
            "sum of -rs/((s(k-1)+alpha)(s(k-2)+alpha)) + "
            "s^r/((s^r(k-1)+alpha)(s^r(k-2)+alpha)) = (1-r)/alpha";
        e.domain = "s != 0, alpha != 0";
        e.lhs = [](const ParamSet& p) { return (1.0 - p.r) / p.alpha; };
        e.term = [](std::int64_t k, const ParamSet& p, double g) {
            const double kd = static_cast<double>(k);
            const Scalar sr = cpow(p.s, p.r);
            const Scalar a1 = p.s * (kd - 1.0) + p.alpha;
            const Scalar a2 = p.s * (kd - 2.0) + p.alpha;
            const Scalar b1 = sr * (kd - 1.0) + p.alpha;
            const Scalar b2 = sr * (kd - 2.0) + p.alpha;
            if (std::abs(a1) < g || std::abs(a2) < g || std::abs(b1) < g ||
                std::abs(b2) < g) {
                throw singularity_error(k, "(s(k-*)+alpha)(s^r(k-*)+alpha)",
                                        "apparent singularity at k=" +
                                            std::to_string(k));
            }
            return -p.r * p.s / (a1 * a2) + sr / (b1 * b2);
        };
        e.prefactor = unit_prefactor;
        e.partial_closed_form = [](std::int64_t N, const ParamSet& p) {
            const double Nd = static_cast<double>(N);
            const Scalar sr = cpow(p.s, p.r);
            return (1.0 - p.r) / p.alpha + p.r / (p.s * (Nd - 1.0) + p.alpha) -
                   kOne / (sr * (Nd - 1.0) + p.alpha);
        };
        e.guard = guards(true, true, false, 0);
        c.push_back(std::move(e));
    }

    {
        Identity e;
        e.id = "SUM-FINITE";
        e.kind = Kind::sum;
        e.start_index = 2;
        e.finite = true;
        e.summary =
            "s sum_{k=2..N} 1/((s(k-1)+alpha)(s(k-2)+alpha)) "
            "= 1/alpha - 1/((N-1)s+alpha)";
        e.domain = "s != 0, alpha != 0, n >= 2";
        e.lhs = [](const ParamSet& p) {
            const double Nd = static_cast<double>(finite_n(p));
            return kOne / p.alpha - kOne / ((Nd - 1.0) * p.s + p.alpha);
        };
        e.term = [](std::int64_t k, const ParamSet& p, double g) {
            const double kd = static_cast<double>(k);
            const Scalar d1 = p.s * (kd - 1.0) + p.alpha;
            const Scalar d2 = p.s * (kd - 2.0) + p.alpha;
            if (std::abs(d1) < g || std::abs(d2) < g) {
                throw singularity_error(k, "(s(k-1)+alpha)(s(k-2)+alpha)",
                                        "apparent singularity at k=" +
                                            std::to_string(k));
            }
            return kOne / (d1 * d2);
        };
        e.prefactor = [](const ParamSet& p) { return p.s; };
        e.partial_closed_form = [](std::int64_t N, const ParamSet& p) {
            const double Nd = static_cast<double>(N);
            return kOne / p.alpha - kOne / (p.s * (Nd - 1.0) + p.alpha);
        };
        e.guard = guards(true, true, false, 2);
        c.push_back(std::move(e));
    }

    {
        Identity e;
        e.id = "SUM-Z";
        e.kind = Kind::sum;
        e.start_index = 1;
        e.finite = true;
        e.summary =
            "N sum_{j=1..N} 1/((j(1-z)+z(N+1)-1)(j(1-z)+Nz)) = 1/z";
        e.domain = "z != 0, n >= 1";
        e.lhs = [](const ParamSet& p) {
            finite_n(p);
            return kOne / p.z;
        };
        e.term = [](std::int64_t k, const ParamSet& p, double g) {
            const double jd = static_cast<double>(k);
            const double Nd = static_cast<double>(finite_n(p));
            const Scalar num = jd * (kOne - p.z) + p.z * (Nd + 1.0) - 1.0;
            const Scalar den = jd * (kOne - p.z) + Nd * p.z;
            if (std::abs(num) < g || std::abs(den) < g) {
                throw singularity_error(k, "(j(1-z)+z(N+1)-1)(j(1-z)+Nz)",
                                        "apparent singularity at j=" +
                                            std::to_string(k));
            }
            return kOne / (num * den);
        };
        e.prefactor = [](const ParamSet& p) {
            return Scalar{static_cast<double>(finite_n(p)), 0.0};
        };
        e.partial_closed_form = [](std::int64_t M, const ParamSet& p) {
            const double Md = static_cast<double>(M);
            const double Nd = static_cast<double>(finite_n(p));
            // Constant denominators at z=1; the generic expression degenerates.
            if (std::abs(kOne - p.z) < 1e-12) return Scalar{Md / Nd, 0.0};
            return Nd / (kOne - p.z) *
                   (kOne / (Nd * p.z) - kOne / (Md * (kOne - p.z) + Nd * p.z));
        };
        e.guard = [](const ParamSet& p) -> std::optional<std::string> {
            if (is_zero(p.z)) return "z != 0";
            if (!p.n_terms) return "n required";
            if (*p.n_terms < 1) return "n >= 1";
            return std::nullopt;
        };
        c.push_back(std::move(e));
    }

    {
        Identity e;
        e.id = "SUM-TRIVIAL";
        e.kind = Kind::sum;
        e.start_index = 1;
        e.finite = true;
        e.summary = "sum_{k=1..N} 1/((s+k)(s+k-1)) = N/((s+N)s)";
        e.domain = "s != 0, n >= 1";
        e.lhs = [](const ParamSet& p) {
            const double Nd = static_cast<double>(finite_n(p));
            return Nd / ((p.s + Nd) * p.s);
        };
        e.term = [](std::int64_t k, const ParamSet& p, double g) {
            const double kd = static_cast<double>(k);
            const Scalar d1 = p.s + kd;
            const Scalar d2 = p.s + kd - 1.0;
            if (std::abs(d1) < g || std::abs(d2) < g) {
                throw singularity_error(k, "(s+k)(s+k-1)",
                                        "apparent singularity at k=" +
                                            std::to_string(k));
            }
            return kOne / (d1 * d2);
        };
        e.prefactor = unit_prefactor;
        e.partial_closed_form = [](std::int64_t M, const ParamSet& p) {
            const double Md = static_cast<double>(M);
            return Md / (p.s * (p.s + Md));
        };
        e.guard = guards(true, false, false, 1);
        c.push_back(std::move(e));
    }

    {
        Identity e;
        e.id = "SUM-POWER";
        e.kind = Kind::sum;
        e.start_index = 2;
        e.summary =
            "alpha s^(r-1) sum_{k>=2} ((k-1)^r-(k-2)^r)/"
            "((s^r(k-1)^r+alpha)(s^r(k-2)^r+alpha)) = 1/s";
        e.domain = "s != 0, alpha != 0, r > 0";
        e.lhs = [](const ParamSet& p) { return kOne / p.s; };
        e.term = [](std::int64_t k, const ParamSet& p, double g) {
            const double kd = static_cast<double>(k);
            const Scalar sr = cpow(p.s, p.r);
            const Scalar d1 = sr * rpow(kd - 1.0, p.r) + p.alpha;
            const Scalar d2 = sr * rpow(kd - 2.0, p.r) + p.alpha;
            if (std::abs(d1) < g || std::abs(d2) < g) {
                throw singularity_error(k, "(s^r(k-1)^r+alpha)(s^r(k-2)^r+alpha)",
                                        "apparent singularity at k=" +
                                            std::to_string(k));
            }
            return (rpow(kd - 1.0, p.r) - rpow(kd - 2.0, p.r)) / (d1 * d2);
        };
        e.prefactor = [](const ParamSet& p) {
            return p.alpha * cpow(p.s, p.r - 1.0);
        };
        e.partial_closed_form = [](std::int64_t N, const ParamSet& p) {
            const double Nd = static_cast<double>(N);
            const Scalar sr = cpow(p.s, p.r);
            const double nr = rpow(Nd - 1.0, p.r);
            return cpow(p.s, p.r - 1.0) * nr / (sr * nr + p.alpha);
        };
        e.guard = guards(true, true, true, 0);
        c.push_back(std::move(e));
    }

    return c;
}

}  // namespace

const std::vector<Identity>& catalog_entries() {
    static const std::vector<Identity> entries = build_catalog();
    return entries;
}

const Identity* find_identity_if_exists(const std::string& id) {
    for (const Identity& e : catalog_entries()) {
        if (e.id == id) return &e;
    }
    return nullptr;
}

const Identity& find_identity(const std::string& id) {
    const Identity* e = find_identity_if_exists(id);
    if (!e) throw unknown_identifier(id, "unknown identity: " + id);
    return *e;
}

void require_in_domain(const Identity& ident, const ParamSet& p) {
    if (auto violated = ident.guard(p)) {
        throw domain_error(*violated,
                           ident.id + ": domain violation: " + *violated);
    }
}

}  // namespace telescopia
