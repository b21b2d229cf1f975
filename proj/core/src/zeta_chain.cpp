#include "telescopia/zeta_chain.hpp"

#include <algorithm>
#include <cmath>

#include "telescopia/catalog.hpp"
#include "telescopia/evaluator.hpp"

namespace telescopia {
namespace {

const Scalar kOne{1.0, 0.0};

double em_remainder_bound(int n, double M) {
    const double nd = n;
    return nd * (nd + 1.0) * (nd + 2.0) * (nd + 3.0) * (nd + 4.0) *
           std::pow(M, -nd - 5.0) / 30240.0;
}

}  // namespace

ZetaValue zeta_int(int n, double tol) {
    if (n < 2) throw domain_error("n >= 2", "zeta_int: n must be >= 2");
    if (!(tol > 0.0)) throw invalid_input("zeta_int: tol must be positive");
    tol = std::max(tol, 1e-15);

    // Direct head sum plus an integral-with-corrections tail; M is the
    // smallest cutoff whose remainder bound clears half the tolerance.
    std::int64_t M = std::max<std::int64_t>(16, 2 * n);
    while (em_remainder_bound(n, static_cast<double>(M)) > 0.5 * tol) {
        ++M;
        if (M > 1'000'000) {
            throw invalid_input("zeta_int: tolerance unreachable");
        }
    }

    const double nd = n;
    const double Md = static_cast<double>(M);
    double head = 0.0;
    for (std::int64_t j = M; j >= 1; --j) {
        head += std::pow(static_cast<double>(j), -nd);
    }
    const double tail = std::pow(Md, 1.0 - nd) / (nd - 1.0) -
                        0.5 * std::pow(Md, -nd) +
                        nd * std::pow(Md, -nd - 1.0) / 12.0 -
                        nd * (nd + 1.0) * (nd + 2.0) *
                            std::pow(Md, -nd - 3.0) / 720.0;

    ZetaValue out;
    out.n = n;
    out.value = head + tail;
    out.tail_bound = em_remainder_bound(n, Md);
    return out;
}

Scalar alternating_zeta_series(Scalar s, double tol) {
    const double q = std::abs(s);
    if (q >= 1.0) {
        throw domain_error("|s| < 1", "alternating_zeta_series: |s| must be < 1");
    }
    if (!(tol > 0.0)) throw invalid_input("alternating_zeta_series: tol > 0");
    if (q == 0.0) return {0.0, 0.0};

    Scalar acc{0.0, 0.0};
    Scalar power = s;  // s^(k+1) with k starting at 1
    double sign = 1.0;
    for (int k = 1; k <= 4000; ++k) {
        power *= s;
        const double zk = zeta_int(k + 1, tol * 1e-2).value;
        const Scalar addend = sign * power * zk;
        acc += addend;
        const double tail_est = std::abs(addend) * q / (1.0 - q);
        if (tail_est <= tol) return acc;
        sign = -sign;
    }
    throw non_finite_error("alternating_zeta_series: did not converge");
}

Scalar rational_series(Scalar s, double tol) {
    if (!(tol > 0.0)) throw invalid_input("rational_series: tol > 0");
    if (std::abs(s) == 0.0) return {0.0, 0.0};
    if (s.imag() == 0.0) {
        const double r = s.real();
        const double nearest = std::round(r);
        if (nearest <= -1.0 && std::abs(r - nearest) < 1e-12) {
            throw domain_error("s not in {-1, -2, ...}",
                               "rational_series: pole at negative integer s");
        }
    }

    // The extrapolated error estimate trails the true error by roughly an
    // order of magnitude on this slowly-converging tail, so aim two orders
    // below the requested tolerance.
    TolerancePolicy policy;
    policy.rel_tol = tol * 1e-2;
    policy.abs_tol = tol * 1e-2;
    policy.max_terms = 1'000'000;
    auto term = [s](std::int64_t k) {
        const double kd = static_cast<double>(k);
        const Scalar den = kd * (kd + s);
        if (std::abs(den) < 1e-14) {
            throw singularity_error(k, "k(k+s)",
                                    "rational_series: term denominator vanishes");
        }
        return s * s / den;
    };
    const ConvergenceResult res =
        sum_series_to_limit(term, 1, policy, true, /*compensated=*/true);
    if (!res.converged) {
        throw non_finite_error("rational_series: did not converge to tolerance");
    }
    return res.value;
}

Scalar base_sum(Scalar b, std::int64_t N) {
    if (N < 1) throw invalid_input("base_sum: N must be >= 1");
    Scalar acc{0.0, 0.0};
    for (std::int64_t k = 1; k <= N; ++k) {
        const double kd = static_cast<double>(k);
        const Scalar d1 = b * kd + kOne;
        const Scalar d2 = b * kd + kOne - b;
        if (std::abs(d1) < 1e-14 || std::abs(d2) < 1e-14) {
            throw singularity_error(k, "(bk+1)(bk+1-b)",
                                    "base_sum: addend denominator vanishes");
        }
        acc += kOne / (d1 * d2);
    }
    return acc;
}

Scalar base_product(Scalar b, std::int64_t N) {
    if (N < 1) throw invalid_input("base_product: N must be >= 1");
    Scalar acc = kOne;
    for (std::int64_t k = 2; k <= N; ++k) {
        const double kd = static_cast<double>(k);
        const Scalar den = (b * kd - b + kOne) * (kd + 1.0);
        if (std::abs(den) < 1e-14) {
            throw singularity_error(k, "(bk-b+1)(k+1)",
                                    "base_product: factor denominator vanishes");
        }
        acc *= kd * (b * kd + kOne) / den;
    }
    return acc;
}

Scalar base_sum_limit(Scalar b) {
    if (std::abs(b) < 1e-14) {
        throw domain_error("b != 0", "base_sum_limit: b must be nonzero");
    }
    return kOne / b;
}

Scalar base_product_limit(Scalar b) {
    if (std::abs(b + kOne) < 1e-14) {
        throw domain_error("b != -1", "base_product_limit: b must not be -1");
    }
    return 2.0 * b / (b + kOne);
}

ChainReport verify_chain(Scalar b, double tol) {
    if (!(tol > 0.0)) throw invalid_input("verify_chain: tol > 0");
    if (std::abs(b) < 1e-14) {
        throw domain_error("b != 0", "verify_chain: b must be nonzero");
    }
    if (std::abs(b + kOne) < 1e-14) {
        throw domain_error("b != -1", "verify_chain: b must not be -1");
    }

    ChainReport rep;
    rep.b = b;
    rep.tolerance = tol;

    TolerancePolicy policy;
    policy.rel_tol = tol * 1e-2;
    policy.abs_tol = tol * 1e-2;
    policy.max_terms = 200'000;

    auto judge = [tol](std::string name, Scalar expected,
                       Scalar observed) -> ChainLink {
        ChainLink link;
        link.name = std::move(name);
        link.expected = expected;
        link.observed = observed;
        link.abs_err = std::abs(observed - expected);
        link.pass = link.abs_err <= tol * std::max(1.0, std::abs(expected));
        return link;
    };

    auto sum_term = [b](std::int64_t k) {
        const double kd = static_cast<double>(k);
        const Scalar d1 = b * kd + kOne;
        const Scalar d2 = b * kd + kOne - b;
        if (std::abs(d1) < 1e-14 || std::abs(d2) < 1e-14) {
            throw singularity_error(k, "(bk+1)(bk+1-b)",
                                    "verify_chain: sum denominator vanishes");
        }
        return kOne / (d1 * d2);
    };
    const ConvergenceResult sum_res = sum_series_to_limit(sum_term, 1, policy, true);
    rep.links.push_back(judge("base-sum -> 1/b", base_sum_limit(b), sum_res.value));

    auto prod_factor = [b](std::int64_t k) {
        const double kd = static_cast<double>(k);
        const Scalar den = (b * kd - b + kOne) * (kd + 1.0);
        if (std::abs(den) < 1e-14) {
            throw singularity_error(k, "(bk-b+1)(k+1)",
                                    "verify_chain: product denominator vanishes");
        }
        return kd * (b * kd + kOne) / den;
    };
    const ConvergenceResult prod_res =
        multiply_series_to_limit(prod_factor, 2, policy, true);
    rep.links.push_back(
        judge("base-product -> 2b/(b+1)", base_product_limit(b), prod_res.value));

    const Scalar s_link = base_product_limit(b);
    EvaluationRequest req;
    req.identity = &find_identity("PROD-BASIC");
    req.params.s = s_link;
    req.mode = EvalMode::to_tolerance;
    req.policy = policy;
    req.accelerate = true;
    const ConvergenceResult cat = evaluate(req);
    rep.links.push_back(
        judge("catalog product at s = 2b/(b+1)", s_link, cat.value));

    rep.all_pass = std::all_of(rep.links.begin(), rep.links.end(),
                               [](const ChainLink& l) { return l.pass; });
    return rep;
}

}  // namespace telescopia
