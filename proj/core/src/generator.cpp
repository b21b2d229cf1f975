#include "telescopia/generator.hpp"

#include <cmath>

namespace telescopia {
namespace {

const Scalar kOne{1.0, 0.0};

bool nearly_real_positive(Scalar v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag()) &&
           std::abs(v.imag()) <= 1e-9 * (1.0 + std::abs(v.real())) &&
           v.real() > 0.0;
}

// logistic pair (sigma, 1-sigma), overflow-safe on both half-planes
std::pair<Scalar, Scalar> sigma_pair(Scalar x) {
    if (x.real() > 0.0) {
        const Scalar t = std::exp(-x);
        return {kOne / (kOne + t), t / (kOne + t)};
    }
    const Scalar t = std::exp(x);
    return {t / (kOne + t), kOne / (kOne + t)};
}

Scalar fd_derivative(const std::function<Scalar(Scalar)>& f, Scalar x) {
    const double h = 1e-6 * std::max(1.0, std::abs(x));
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

AsymptoticClass classify(const GeneratorFunction& f, const ClassifyOptions& opts) {
    if (!f.eval) throw invalid_input("classify: f has no eval");
    if (opts.probes.size() < 2) throw invalid_input("classify: need >= 2 probes");

    // Screening: real-positive and single-signed on [1, 1e6].
    for (int i = 0; i <= 24; ++i) {
        const double x = std::pow(10.0, 6.0 * i / 24.0);
        const Scalar v = f.eval(Scalar{x, 0.0});
        if (!nearly_real_positive(v)) {
            throw unsupported_function(f.name +
                                       ": not real-positive on [1, 1e6] (x=" +
                                       std::to_string(x) + ")");
        }
    }

    const double s = opts.s_probe;
    const std::size_t np = opts.probes.size();
    const double v_prev = f.eval(Scalar{opts.probes[np - 2], 0.0}).real();
    const double v_last = f.eval(Scalar{opts.probes[np - 1], 0.0}).real();

    bool saturating = std::abs(v_last - v_prev) <= 1e-4 * std::max(1.0, std::abs(v_last));
    AsymptoticClass empirical;

    if (saturating) {
        empirical = Saturating{v_last};
    } else {
        // Two probe scales split C0 from r: f(sN)/f(N) -> C0 s^r and
        // f(s^2 N)/f(N) -> C0 s^(2r).
        std::vector<double> r_est;
        double last_ratio1 = 0.0;
        for (const double N : opts.probes) {
            const double fN = f.eval(Scalar{N, 0.0}).real();
            const double fsN = f.eval(Scalar{s * N, 0.0}).real();
            const double fs2N = f.eval(Scalar{s * s * N, 0.0}).real();
            if (fN == 0.0 || !std::isfinite(fsN) || !std::isfinite(fs2N)) {
                throw unsupported_function(f.name + ": probe ratios not finite");
            }
            const double ratio1 = fsN / fN;
            const double ratio2 = fs2N / fN;
            const double r_j = std::log(std::abs(ratio2 / ratio1)) / std::log(s);
            if (!std::isfinite(r_j)) {
                throw unsupported_function(f.name + ": probe ratios not finite");
            }
            r_est.push_back(r_j);
            last_ratio1 = ratio1;
        }
        const double r_a = r_est[r_est.size() - 2];
        const double r_b = r_est[r_est.size() - 1];
        if (std::abs(r_a - r_b) >= opts.r_stability) {
            throw unsupported_function(
                f.name + ": growth exponent did not stabilize over the probes");
        }
        const double C0 = last_ratio1 / std::pow(s, r_b);
        empirical = PowerLaw{C0, r_b};
    }

    if (f.declared) {
        const AsymptoticClass& d = *f.declared;
        const bool kind_match = d.index() == empirical.index();
        if (!kind_match) {
            throw classification_conflict(
                f.name + ": declared class kind disagrees with probes");
        }
        if (std::holds_alternative<PowerLaw>(d)) {
            const PowerLaw& pd = std::get<PowerLaw>(d);
            const PowerLaw& pe = std::get<PowerLaw>(empirical);
            if (std::abs(pd.r - pe.r) > 0.02 ||
                std::abs(pd.C0 - pe.C0) > 0.05 * std::max(1.0, std::abs(pd.C0))) {
                throw classification_conflict(
                    f.name + ": declared power law (C0=" + std::to_string(pd.C0) +
                    ", r=" + std::to_string(pd.r) + ") disagrees with probes (C0=" +
                    std::to_string(pe.C0) + ", r=" + std::to_string(pe.r) + ")");
            }
        } else {
            const Saturating& sd = std::get<Saturating>(d);
            const Saturating& se = std::get<Saturating>(empirical);
            if (std::abs(sd.L - se.L) > 1e-3 * std::max(1.0, std::abs(sd.L))) {
                throw classification_conflict(
                    f.name + ": declared saturation level disagrees with probes");
            }
        }
        return d;  // validated declaration is exact
    }
    return empirical;
}

Scalar solve_scale(const GeneratorFunction& f, Scalar alpha,
                   const AsymptoticClass& cls) {
    const Scalar f0 = f.eval(Scalar{0.0, 0.0});
    const Scalar f2 = f.eval(Scalar{2.0, 0.0});
    if (std::abs(f0 + alpha) < 1e-14) {
        throw domain_error("alpha != -f(0)", f.name + ": alpha cancels f(0)");
    }
    if (std::abs(f2) < 1e-14) {
        throw domain_error("f(2) != 0", f.name + ": f(2) vanishes");
    }
    if (std::holds_alternative<PowerLaw>(cls)) {
        const PowerLaw& pl = std::get<PowerLaw>(cls);
        if (std::abs(pl.C0) < 1e-14) {
            throw domain_error("C0 != 0", f.name + ": zero asymptotic constant");
        }
        return (f0 + alpha) / (f2 * pl.C0);
    }
    const Saturating& st = std::get<Saturating>(cls);
    if (std::abs(st.L) < 1e-14) {
        throw domain_error("L != 0", f.name + ": zero saturation level");
    }
    if (std::abs(st.L + alpha) < 1e-14) {
        throw domain_error("alpha != -L", f.name + ": alpha cancels the limit");
    }
    return (f0 + alpha) * st.L / (f2 * (st.L + alpha));
}

Scalar GeneratedIdentity::term(std::int64_t k, Scalar s, double guard_tol) const {
    const double kd = static_cast<double>(k);
    const Scalar fk = f.eval(Scalar{kd, 0.0});
    const Scalar fk1 = f.eval(Scalar{kd + 1.0, 0.0});
    const Scalar up = f.eval(s * (kd - 1.0)) + alpha;
    const Scalar dn = f.eval(s * (kd - 2.0)) + alpha;
    if (std::abs(fk1) < guard_tol) {
        throw singularity_error(k, "f(k+1)", "apparent singularity at k=" +
                                                 std::to_string(k));
    }
    if (std::abs(dn) < guard_tol) {
        throw singularity_error(k, "(f(s(k-2))+alpha)",
                                "apparent singularity at k=" + std::to_string(k));
    }
    return fk * up / (fk1 * dn);
}

Scalar GeneratedIdentity::partial_closed_form(std::int64_t N, Scalar s) const {
    const double Nd = static_cast<double>(N);
    const Scalar f0 = f.eval(Scalar{0.0, 0.0});
    const Scalar f2 = f.eval(Scalar{2.0, 0.0});
    return beta * f2 * (f.eval(s * (Nd - 1.0)) + alpha) /
           ((f0 + alpha) * f.eval(Scalar{Nd + 1.0, 0.0}));
}

Scalar GeneratedIdentity::infinite_value(Scalar s) const {
    const Scalar f0 = f.eval(Scalar{0.0, 0.0});
    const Scalar f2 = f.eval(Scalar{2.0, 0.0});
    if (std::holds_alternative<PowerLaw>(cls)) {
        const PowerLaw& pl = std::get<PowerLaw>(cls);
        return beta * f2 * pl.C0 * std::pow(s, pl.r) / (f0 + alpha);
    }
    const Saturating& st = std::get<Saturating>(cls);
    return beta * f2 * (st.L + alpha) / ((f0 + alpha) * st.L);
}

GeneratedIdentity synthesize(const GeneratorFunction& f, Scalar alpha,
                             const ClassifyOptions& opts) {
    GeneratedIdentity gen;
    gen.f = f;
    gen.alpha = alpha;
    gen.cls = classify(f, opts);
    gen.beta = solve_scale(f, alpha, gen.cls);
    return gen;
}

DerivedSum derive_sum(const GeneratedIdentity& gen, DeriveVariant variant,
                      bool use_finite_difference) {
    DerivedSum d;
    d.variant = variant;
    const GeneratorFunction f = gen.f;
    const AsymptoticClass cls = gen.cls;

    if (variant == DeriveVariant::wrt_alpha) {
        d.requires_deriv = false;
        d.term = [f](std::int64_t k, Scalar s, Scalar alpha) {
            const double kd = static_cast<double>(k);
            const Scalar d1 = f.eval(s * (kd - 2.0)) + alpha;
            const Scalar d2 = f.eval(s * (kd - 1.0)) + alpha;
            if (std::abs(d1) < 1e-14 || std::abs(d2) < 1e-14) {
                throw singularity_error(k, "(f(s(k-*))+alpha)",
                                        "apparent singularity at k=" +
                                            std::to_string(k));
            }
            return kOne / d1 - kOne / d2;
        };
        d.partial_closed_form = [f](std::int64_t N, Scalar s, Scalar alpha) {
            const double Nd = static_cast<double>(N);
            return kOne / (f.eval(Scalar{0.0, 0.0}) + alpha) -
                   kOne / (f.eval(s * (Nd - 1.0)) + alpha);
        };
        d.lhs = [f, cls](Scalar, Scalar alpha) {
            const Scalar head = kOne / (f.eval(Scalar{0.0, 0.0}) + alpha);
            if (std::holds_alternative<Saturating>(cls)) {
                const double L = std::get<Saturating>(cls).L;
                return head - kOne / (Scalar{L, 0.0} + alpha);
            }
            return head;  // 1/(f+alpha) -> 0 for unbounded f
        };
        return d;
    }

    if (!use_finite_difference && !f.deriv) {
        throw capability_error(f.name +
                               ": wrt-s derivation needs an analytic derivative "
                               "(or the finite-difference fallback)");
    }
    d.requires_deriv = !use_finite_difference;

    auto fprime = [f, use_finite_difference](Scalar x) {
        return use_finite_difference ? fd_derivative(f.eval, x) : f.deriv(x);
    };
    auto h = [f, fprime](double j, Scalar s, Scalar alpha) -> Scalar {
        if (j == 0.0) return {0.0, 0.0};
        const Scalar den = f.eval(s * j) + alpha;
        if (std::abs(den) < 1e-14) {
            throw singularity_error(static_cast<std::int64_t>(j),
                                    "(f(sj)+alpha)",
                                    "apparent singularity at j=" +
                                        std::to_string(static_cast<long long>(j)));
        }
        return j * fprime(s * j) / den;
    };

    d.term = [h](std::int64_t k, Scalar s, Scalar alpha) {
        const double kd = static_cast<double>(k);
        return h(kd - 1.0, s, alpha) - h(kd - 2.0, s, alpha);
    };
    d.partial_closed_form = [h](std::int64_t N, Scalar s, Scalar alpha) {
        return h(static_cast<double>(N) - 1.0, s, alpha);
    };
    d.lhs = [cls, h](Scalar s, Scalar alpha) -> Scalar {
        if (std::holds_alternative<PowerLaw>(cls)) {
            return std::get<PowerLaw>(cls).r / s;
        }
        // For a saturating f the limit of h(N) is zero provided f' dies off;
        // otherwise fall back to the largest-probe estimate.
        const Scalar tail = h(1e6, s, alpha);
        if (std::abs(tail) < 1e-14) return {0.0, 0.0};
        return tail;
    };
    return d;
}

// ---- presets ----------------------------------------------------------------

namespace {

Preset make_frac_square() {
    Preset p;
    p.f.name = "frac-square";
    p.f.eval = [](Scalar x) { return x * x / (kOne + x); };
    p.f.deriv = [](Scalar x) {
        const Scalar u = kOne + x;
        return (x * x + 2.0 * x) / (u * u);
    };
    p.f.declared = PowerLaw{1.0, 1.0};
    p.transcribed_variant = DeriveVariant::wrt_s;
    // Hand-derived form shipped with this preset; kept verbatim as a
    // cross-check target.
    p.transcribed_term = [](std::int64_t k, Scalar s, Scalar alpha) {
        auto T = [&](double j) -> Scalar {
            const Scalar lin = kOne + s * j;
            const Scalar den = s * s * j * j + s * s * s * j * j * j + alpha * lin * lin;
            return (2.0 * j * j + j * j * j) / den;
        };
        const double kd = static_cast<double>(k);
        return s * (T(kd - 1.0) - T(kd - 2.0));
    };
    return p;
}

Preset make_tanh() {
    Preset p;
    p.f.name = "tanh";
    p.f.eval = [](Scalar x) { return std::tanh(x); };
    p.f.deriv = [](Scalar x) {
        const Scalar t = std::tanh(x);
        return kOne - t * t;
    };
    p.f.declared = Saturating{1.0};
    p.transcribed_variant = DeriveVariant::wrt_alpha;
    p.transcribed_term = [](std::int64_t k, Scalar s, Scalar alpha) {
        const double kd = static_cast<double>(k);
        return kOne / (std::tanh(s * (kd - 2.0)) + alpha) -
               kOne / (std::tanh(s * (kd - 1.0)) + alpha);
    };
    return p;
}

Preset make_x_tanh() {
    Preset p;
    p.f.name = "x-tanh";
    p.f.eval = [](Scalar x) { return x * std::tanh(x); };
    p.f.deriv = [](Scalar x) {
        const Scalar t = std::tanh(x);
        return t + x * (kOne - t * t);
    };
    p.f.declared = PowerLaw{1.0, 1.0};
    p.transcribed_variant = DeriveVariant::wrt_s;
    p.transcribed_term = [](std::int64_t k, Scalar s, Scalar alpha) {
        auto Q = [&](double j) -> Scalar {
            const Scalar c = std::cosh(s * j);
            const Scalar num = j * std::tanh(s * j) + s * j * j / (c * c);
            const Scalar den = s * j * std::tanh(s * j) + alpha;
            return num / den;
        };
        const double kd = static_cast<double>(k);
        return Q(kd - 1.0) - Q(kd - 2.0);
    };
    return p;
}

Preset make_x_arctan() {
    Preset p;
    p.f.name = "x-arctan";
    p.f.eval = [](Scalar x) { return x * std::atan(x); };
    p.f.deriv = [](Scalar x) { return std::atan(x) + x / (kOne + x * x); };
    p.f.declared = PowerLaw{1.0, 1.0};
    p.transcribed_variant = DeriveVariant::wrt_s;
    p.transcribed_term = [](std::int64_t k, Scalar s, Scalar alpha) {
        auto R = [&](double j) -> Scalar {
            const Scalar at = std::atan(s * j);
            const Scalar num = j * at + s * s * j * j * j * at + s * j * j;
            const Scalar den =
                (kOne + s * s * j * j) * (s * j * at + alpha);
            return num / den;
        };
        const double kd = static_cast<double>(k);
        return R(kd - 1.0) - R(kd - 2.0);
    };
    return p;
}

Preset make_x_exp() {
    Preset p;
    p.f.name = "x-exp";
    p.f.eval = [](Scalar x) { return x * sigma_pair(x).first; };
    p.f.deriv = [](Scalar x) {
        const auto [sig, one_minus] = sigma_pair(x);
        return sig * (kOne + x * one_minus);
    };
    p.f.declared = PowerLaw{1.0, 1.0};
    p.transcribed_variant = DeriveVariant::wrt_s;
    p.transcribed_term = [](std::int64_t k, Scalar s, Scalar alpha) {
        const double kd = static_cast<double>(k);
        const double j1 = kd - 1.0;
        const double j2 = kd - 2.0;
        const Scalar first =
            (j1 * std::exp(-s) + s * j1 * j1 * std::exp(-s) -
             s * j1 * j1 * std::exp(s * (kd - 2.0)) /
                 (kOne + std::exp(s * (kd - 1.0)))) /
            ((alpha + s * j1) * std::exp(s * (kd - 1.0)) + alpha);
        const Scalar second =
            (j2 * std::exp(-2.0 * s) + s * j2 * j2 * std::exp(-2.0 * s) -
             s * j2 * j2 * std::exp(s * (kd - 4.0)) /
                 (kOne + std::exp(s * (kd - 2.0)))) /
            ((alpha + s * j2) * std::exp(s * (kd - 2.0)) + alpha);
        return std::exp(s * kd) * (first - second);
    };
    return p;
}

}  // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = {
        make_frac_square(), make_tanh(), make_x_tanh(), make_x_arctan(),
        make_x_exp()};
    return all;
}

const Preset* find_preset_if_exists(const std::string& name) {
    for (const Preset& p : presets()) {
        if (p.f.name == name) return &p;
    }
    return nullptr;
}

const Preset& find_preset(const std::string& name) {
    const Preset* p = find_preset_if_exists(name);
    if (!p) throw unknown_identifier(name, "unknown preset: " + name);
    return *p;
}

// ---- transcription cross-checks ---------------------------------------------

CrossCheckPoint cross_check_point(const Preset& preset, std::int64_t k, Scalar s,
                                  Scalar alpha) {
    const GeneratedIdentity gen = synthesize(preset.f, alpha);
    const DerivedSum derived = derive_sum(gen, preset.transcribed_variant);
    CrossCheckPoint pt;
    pt.k = k;
    pt.s = s;
    pt.alpha = alpha;
    pt.transcribed = preset.transcribed_term(k, s, alpha);
    pt.derived = derived.term(k, s, alpha);
    pt.abs_diff = std::abs(pt.transcribed - pt.derived);
    const double scale =
        std::max({std::abs(pt.transcribed), std::abs(pt.derived), 1e-300});
    pt.rel_diff = pt.abs_diff / scale;
    return pt;
}

CrossCheckReport cross_check_suite(const Preset& preset,
                                   const CrossCheckGrid& grid) {
    CrossCheckReport rep;
    rep.preset = preset.f.name;
    rep.variant =
        preset.transcribed_variant == DeriveVariant::wrt_s ? "wrt-s" : "wrt-alpha";
    rep.threshold = grid.threshold;

    const GeneratedIdentity gen = synthesize(preset.f, grid.alpha_values.front());
    const DerivedSum derived = derive_sum(gen, preset.transcribed_variant);

    for (const Scalar s : grid.s_values) {
        for (const Scalar alpha : grid.alpha_values) {
            for (const std::int64_t k : grid.k_values) {
                CrossCheckPoint pt;
                pt.k = k;
                pt.s = s;
                pt.alpha = alpha;
                pt.transcribed = preset.transcribed_term(k, s, alpha);
                pt.derived = derived.term(k, s, alpha);
                pt.abs_diff = std::abs(pt.transcribed - pt.derived);
                const double scale = std::max(
                    {std::abs(pt.transcribed), std::abs(pt.derived), 1e-300});
                pt.rel_diff = pt.abs_diff / scale;
                if (pt.rel_diff >= rep.max_rel_diff) {
                    rep.max_rel_diff = pt.rel_diff;
                    rep.worst = pt;
                }
                rep.max_abs_diff = std::max(rep.max_abs_diff, pt.abs_diff);
                rep.points.push_back(pt);
            }
        }
    }
    rep.matched = rep.max_rel_diff <= rep.threshold;
    return rep;
}

std::vector<CrossCheckReport> cross_check_all(const CrossCheckGrid& grid) {
    std::vector<CrossCheckReport> out;
    out.reserve(presets().size());
    for (const Preset& p : presets()) {
        out.push_back(cross_check_suite(p, grid));
    }
    return out;
}

// ---- adapters ---------------------------------------------------------------

Identity as_identity(const GeneratedIdentity& gen, const std::string& id) {
    Identity out;
    out.id = id;
    out.kind = Kind::product;
    out.start_index = gen.start_index;
    out.finite = false;
    out.summary = "generated product over f=" + gen.f.name +
                  " (alpha fixed at synthesis)";
    const GeneratedIdentity g = gen;
    out.lhs = [g](const ParamSet& p) { return g.infinite_value(p.s); };
    out.term = [g](std::int64_t k, const ParamSet& p, double tol) {
        return g.term(k, p.s, tol);
    };
    out.prefactor = [g](const ParamSet&) { return g.beta; };
    out.partial_closed_form = [g](std::int64_t N, const ParamSet& p) {
        return g.partial_closed_form(N, p.s);
    };
    out.guard = [](const ParamSet&) { return std::nullopt; };
    return out;
}

Identity as_identity(const DerivedSum& sum, Scalar alpha, const std::string& id) {
    Identity out;
    out.id = id;
    out.kind = Kind::sum;
    out.start_index = 2;
    out.finite = false;
    out.summary = "derived log-derivative sum";
    const DerivedSum d = sum;
    out.lhs = [d, alpha](const ParamSet& p) { return d.lhs(p.s, alpha); };
    out.term = [d, alpha](std::int64_t k, const ParamSet& p, double) {
        return d.term(k, p.s, alpha);
    };
    out.prefactor = [](const ParamSet&) { return kOne; };
    out.partial_closed_form = [d, alpha](std::int64_t N, const ParamSet& p) {
        return d.partial_closed_form(N, p.s, alpha);
    };
    out.guard = [](const ParamSet&) { return std::nullopt; };
    return out;
}

}  // namespace telescopia
