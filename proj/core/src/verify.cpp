#include "telescopia/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <numbers>
#include <set>
#include <thread>

#include "telescopia/zeta_chain.hpp"

namespace telescopia {
namespace {

constexpr const char* kCanonicalAxes[] = {"s", "alpha", "r", "n", "z", "b"};

int axis_rank(const std::string& key) {
    for (int i = 0; i < 6; ++i) {
        if (key == kCanonicalAxes[i]) return i;
    }
    throw invalid_input("sweep: unknown grid axis '" + key + "'");
}

std::vector<SweepAxis> canonicalize(std::vector<SweepAxis> axes) {
    std::set<std::string> seen;
    for (const SweepAxis& a : axes) {
        axis_rank(a.first);
        if (a.second.empty()) {
            throw invalid_input("sweep: axis '" + a.first + "' has no values");
        }
        if (!seen.insert(a.first).second) {
            throw invalid_input("sweep: duplicate axis '" + a.first + "'");
        }
    }
    std::stable_sort(axes.begin(), axes.end(),
                     [](const SweepAxis& a, const SweepAxis& b) {
                         return axis_rank(a.first) < axis_rank(b.first);
                     });
    return axes;
}

struct GridPoint {
    ParamSet params;
    std::optional<std::int64_t> n;
};

void apply_axis(GridPoint& gp, const std::string& key, Scalar v) {
    if (key == "s") {
        gp.params.s = v;
    } else if (key == "alpha") {
        gp.params.alpha = v;
    } else if (key == "z") {
        gp.params.z = v;
    } else if (key == "b") {
        gp.params.b = v;
    } else if (key == "r") {
        if (v.imag() != 0.0) throw invalid_input("sweep: r must be real");
        gp.params.r = v.real();
    } else {  // n
        if (v.imag() != 0.0 || v.real() != std::floor(v.real())) {
            throw invalid_input("sweep: n must be a real integer");
        }
        gp.n = static_cast<std::int64_t>(std::llround(v.real()));
    }
}

std::vector<GridPoint> expand(const std::vector<SweepAxis>& axes,
                              const ParamSet& base) {
    std::size_t total = 1;
    for (const SweepAxis& a : axes) total *= a.second.size();

    std::vector<GridPoint> out;
    out.reserve(total);
    std::vector<std::size_t> idx(axes.size(), 0);
    for (std::size_t i = 0; i < total; ++i) {
        GridPoint gp{base, std::nullopt};
        for (std::size_t a = 0; a < axes.size(); ++a) {
            apply_axis(gp, axes[a].first, axes[a].second[idx[a]]);
        }
        out.push_back(gp);
        for (std::size_t a = axes.size(); a-- > 0;) {
            if (++idx[a] < axes[a].second.size()) break;
            idx[a] = 0;
        }
    }
    return out;
}

std::vector<VerificationReport> parallel_map(
    std::size_t count, int threads,
    const std::function<VerificationReport(std::size_t)>& fn) {
    std::vector<VerificationReport> out(count);
    const int usable =
        std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (usable == 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(usable);
    for (int t = 0; t < usable; ++t) {
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < count;
                 i = next.fetch_add(1)) {
                out[i] = fn(i);
            }
        });
    }
    for (std::thread& th : pool) th.join();
    return out;
}

void judge(VerificationReport& rep) {
    rep.abs_err = std::abs(rep.observed - rep.expected);
    rep.rel_err = rep.abs_err / std::max(std::abs(rep.expected), 1e-300);
    const bool ok =
        rep.abs_err <= rep.tolerance * std::max(1.0, std::abs(rep.expected));
    rep.verdict = ok ? Verdict::pass : Verdict::fail;
    if (!ok) rep.note = "error above tolerance";
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass:
            return "pass";
        case Verdict::fail:
            return "fail";
        default:
            return "skipped_singularity";
    }
}

VerificationReport verify_one(const Identity& ident, ParamSet params,
                              EvalMode mode, std::optional<std::int64_t> n,
                              double tolerance, const TolerancePolicy& policy) {
    VerificationReport rep;
    rep.id = ident.id;
    rep.mode = mode;
    rep.tolerance = tolerance;
    if (ident.finite && n) params.n_terms = *n;
    rep.params = params;
    rep.n = n;

    try {
        EvaluationRequest req;
        req.identity = &ident;
        req.params = params;
        req.policy = policy;

        if (mode == EvalMode::fixed_n) {
            if (ident.finite) {
                req.mode = EvalMode::fixed_n;
                rep.expected = ident.lhs(params);
                const ConvergenceResult res = evaluate(req);
                rep.observed = res.value;
                rep.converged = res.converged;
            } else {
                if (!n) {
                    throw invalid_input(ident.id +
                                        ": fixed-N verification requires n");
                }
                req.mode = EvalMode::fixed_n;
                req.n = n;
                rep.expected = ident.partial_closed_form(*n, params);
                const ConvergenceResult res = evaluate(req);
                rep.observed = res.value;
                rep.converged = res.converged;
            }
        } else {
            req.mode = EvalMode::to_tolerance;
            req.accelerate = true;
            rep.expected = ident.lhs(params);
            const ConvergenceResult res = evaluate(req);
            rep.observed = res.value;
            rep.converged = res.converged;
            if (!res.converged) {
                rep.abs_err = std::abs(rep.observed - rep.expected);
                rep.rel_err =
                    rep.abs_err / std::max(std::abs(rep.expected), 1e-300);
                rep.verdict = Verdict::fail;
                rep.note = "did not converge within the term budget";
                return rep;
            }
        }
        judge(rep);
    } catch (const domain_error& e) {
        rep.verdict = Verdict::skipped_singularity;
        rep.note = "domain: " + e.constraint;
    } catch (const singularity_error& e) {
        rep.verdict = Verdict::skipped_singularity;
        rep.note = e.what();
    }
    return rep;
}

std::vector<VerificationReport> sweep(const SweepSpec& spec,
                                      const SweepOptions& options) {
    const Identity& ident = find_identity(spec.identity);
    const std::vector<SweepAxis> axes = canonicalize(spec.axes);
    const std::vector<GridPoint> points = expand(axes, ParamSet{});
    return parallel_map(points.size(), options.threads, [&](std::size_t i) {
        return verify_one(ident, points[i].params, spec.mode, points[i].n,
                          spec.tolerance, options.policy);
    });
}

namespace {

std::vector<Scalar> reals(std::initializer_list<double> xs) {
    std::vector<Scalar> out;
    for (double x : xs) out.emplace_back(x, 0.0);
    return out;
}

struct SuiteBuilder {
    const RegressionOptions& options;
    std::vector<std::function<VerificationReport()>> jobs;
    std::vector<std::shared_ptr<Identity>> keep_alive;

    std::shared_ptr<Identity> catalog_copy(const std::string& id) {
        auto sp = std::make_shared<Identity>(find_identity(id));
        if (options.mutate && options.mutate_id == id) options.mutate(*sp);
        keep_alive.push_back(sp);
        return sp;
    }

    std::shared_ptr<Identity> wrap(Identity ident) {
        auto sp = std::make_shared<Identity>(std::move(ident));
        if (options.mutate && options.mutate_id == sp->id) options.mutate(*sp);
        keep_alive.push_back(sp);
        return sp;
    }

    void add_grid(std::shared_ptr<Identity> sp, std::vector<SweepAxis> axes,
                  EvalMode mode, double tolerance, ParamSet base = {},
                  TolerancePolicy policy = {}) {
        const std::vector<GridPoint> points =
            expand(canonicalize(std::move(axes)), base);
        for (const GridPoint& gp : points) {
            jobs.push_back([sp, gp, mode, tolerance, policy]() {
                return verify_one(*sp, gp.params, mode, gp.n, tolerance, policy);
            });
        }
    }
};

VerificationReport constant_report(std::string id, ParamSet params,
                                   Scalar expected, Scalar observed,
                                   double tolerance, std::string note) {
    VerificationReport rep;
    rep.id = std::move(id);
    rep.params = params;
    rep.mode = EvalMode::to_tolerance;
    rep.expected = expected;
    rep.observed = observed;
    rep.tolerance = tolerance;
    rep.converged = true;
    rep.note = std::move(note);
    rep.abs_err = std::abs(observed - expected);
    rep.rel_err = rep.abs_err / std::max(std::abs(expected), 1e-300);
    rep.verdict = rep.abs_err <= tolerance * std::max(1.0, std::abs(expected))
                      ? Verdict::pass
                      : Verdict::fail;
    return rep;
}

}  // namespace

RegressionResult regression_suite(const RegressionOptions& options) {
    SuiteBuilder b{options, {}, {}};

    const std::vector<Scalar> base_grid = reals({0.5, 1.0, 2.0, 3.0});
    const std::vector<Scalar> counts = reals({10, 100, 10000});

    // Finite identities: full evaluation against the closed value.
    b.add_grid(b.catalog_copy("PROD-FINITE"),
               {{"s", base_grid}, {"alpha", base_grid}, {"n", counts}},
               EvalMode::fixed_n, 1e-12);
    b.add_grid(b.catalog_copy("PROD-TRIVIAL"), {{"s", base_grid}, {"n", counts}},
               EvalMode::fixed_n, 1e-12);
    b.add_grid(b.catalog_copy("PROD-Z"),
               {{"n", counts}, {"z", reals({0.25, 0.5, 2.0, 3.0})}},
               EvalMode::fixed_n, 1e-12);
    b.add_grid(b.catalog_copy("SUM-FINITE"),
               {{"s", base_grid}, {"alpha", base_grid}, {"n", counts}},
               EvalMode::fixed_n, 1e-12);
    b.add_grid(b.catalog_copy("SUM-Z"),
               {{"n", counts}, {"z", reals({0.25, 0.5, 1.0, 2.0})}},
               EvalMode::fixed_n, 1e-12);
    b.add_grid(b.catalog_copy("SUM-TRIVIAL"), {{"s", base_grid}, {"n", counts}},
               EvalMode::fixed_n, 1e-12);

    // Infinite identities: brute partials against the exact partial form.
    const std::vector<Scalar> two_s = reals({0.5, 2.0});
    const std::vector<Scalar> two_alpha = reals({1.0, 2.0});
    const std::vector<Scalar> two_r = reals({2.0, 3.0});
    const std::vector<Scalar> small_counts = reals({10, 100});
    b.add_grid(b.catalog_copy("PROD-BASIC"), {{"s", base_grid}, {"n", counts}},
               EvalMode::fixed_n, 1e-12);
    b.add_grid(b.catalog_copy("PROD-PARAM"),
               {{"s", two_s}, {"alpha", reals({1.0, 3.0})}, {"n", reals({10, 1000})}},
               EvalMode::fixed_n, 1e-12);
    b.add_grid(b.catalog_copy("PROD-POWER-RATIO"),
               {{"s", two_s}, {"alpha", two_alpha}, {"r", two_r}, {"n", small_counts}},
               EvalMode::fixed_n, 1e-12);
    b.add_grid(b.catalog_copy("PROD-POWER"),
               {{"s", two_s}, {"alpha", two_alpha}, {"r", two_r}, {"n", small_counts}},
               EvalMode::fixed_n, 1e-12);
    b.add_grid(b.catalog_copy("SUM-BASIC"), {{"s", base_grid}, {"n", counts}},
               EvalMode::fixed_n, 1e-12);
    b.add_grid(b.catalog_copy("SUM-PARAM"),
               {{"s", two_s}, {"alpha", reals({1.0, 3.0})}, {"n", reals({10, 1000})}},
               EvalMode::fixed_n, 1e-12);
    b.add_grid(b.catalog_copy("SUM-POWER-RATIO"),
               {{"s", two_s}, {"alpha", two_alpha}, {"r", two_r}, {"n", small_counts}},
               EvalMode::fixed_n, 1e-12);
    b.add_grid(b.catalog_copy("SUM-POWER"),
               {{"s", two_s}, {"alpha", two_alpha}, {"r", two_r}, {"n", small_counts}},
               EvalMode::fixed_n, 1e-12);

    // Complex-parameter smoke checks (linear closed forms only; powers of
    // complex bases pick branches the factored forms need not follow).
    const Scalar cs{1.0, 0.5};
    const Scalar ca{2.0, -1.0};
    ParamSet complex_base;
    complex_base.s = cs;
    complex_base.alpha = ca;
    for (const char* id :
         {"PROD-BASIC", "PROD-PARAM", "SUM-BASIC", "SUM-PARAM"}) {
        b.add_grid(b.catalog_copy(id), {{"n", reals({50})}}, EvalMode::fixed_n,
                   1e-10, complex_base);
    }
    for (const char* id : {"PROD-FINITE", "SUM-FINITE"}) {
        b.add_grid(b.catalog_copy(id), {{"n", reals({50})}}, EvalMode::fixed_n,
                   1e-10, complex_base);
    }

    // To-tolerance convergence against the closed limits.
    TolerancePolicy tight;
    tight.rel_tol = 1e-8;
    tight.abs_tol = 1e-12;
    b.add_grid(b.catalog_copy("PROD-BASIC"), {{"s", reals({0.5, 2.0, 3.0})}},
               EvalMode::to_tolerance, 1e-6, {}, tight);
    b.add_grid(b.catalog_copy("SUM-BASIC"), {{"s", base_grid}},
               EvalMode::to_tolerance, 1e-6, {}, tight);
    b.add_grid(b.catalog_copy("SUM-PARAM"),
               {{"s", reals({1.0, 2.0})}, {"alpha", reals({1.0, 3.0})}},
               EvalMode::to_tolerance, 1e-6, {}, tight);
    b.add_grid(b.catalog_copy("SUM-POWER"),
               {{"s", reals({1.0, 2.0})}, {"alpha", two_alpha}, {"r", two_r}},
               EvalMode::to_tolerance, 1e-6, {}, tight);
    b.add_grid(b.catalog_copy("SUM-POWER-RATIO"),
               {{"s", reals({2.0, 3.0})}, {"alpha", two_alpha}, {"r", two_r}},
               EvalMode::to_tolerance, 1e-6, {}, tight);

    // Generated products and their derived sums, per preset.
    for (const Preset& preset : presets()) {
        for (const double alpha : {1.0, 2.0}) {
            const GeneratedIdentity gen =
                synthesize(preset.f, Scalar{alpha, 0.0});
            ParamSet base;
            base.alpha = Scalar{alpha, 0.0};

            b.add_grid(b.wrap(as_identity(gen, "GEN:" + preset.f.name)),
                       {{"s", two_s}, {"n", small_counts}}, EvalMode::fixed_n,
                       1e-10, base);

            const DerivedSum da = derive_sum(gen, DeriveVariant::wrt_alpha);
            b.add_grid(b.wrap(as_identity(da, Scalar{alpha, 0.0},
                                          "DSUM-A:" + preset.f.name)),
                       {{"s", two_s}, {"n", small_counts}}, EvalMode::fixed_n,
                       1e-12, base);

            const DerivedSum ds = derive_sum(gen, DeriveVariant::wrt_s);
            b.add_grid(b.wrap(as_identity(ds, Scalar{alpha, 0.0},
                                          "DSUM-S:" + preset.f.name)),
                       {{"s", two_s}, {"n", small_counts}}, EvalMode::fixed_n,
                       1e-12, base);
        }
        const GeneratedIdentity gen1 = synthesize(preset.f, Scalar{1.0, 0.0});
        ParamSet base1;
        base1.alpha = Scalar{1.0, 0.0};
        b.add_grid(b.wrap(as_identity(gen1, "GEN:" + preset.f.name)),
                   {{"s", reals({2.0})}}, EvalMode::to_tolerance, 1e-6, base1,
                   tight);
    }

    RegressionResult out;
    out.reports = parallel_map(
        b.jobs.size(), options.threads,
        [&](std::size_t i) { return b.jobs[i](); });

    // Integer zeta references.
    {
        ParamSet p;
        const double z2 = std::numbers::pi * std::numbers::pi / 6.0;
        const double z4 = std::pow(std::numbers::pi, 4) / 90.0;
        out.reports.push_back(constant_report(
            "ZETA(2)", p, Scalar{z2, 0.0}, Scalar{zeta_int(2).value, 0.0},
            1e-12, "integer zeta vs pi^2/6"));
        out.reports.push_back(constant_report(
            "ZETA(4)", p, Scalar{z4, 0.0}, Scalar{zeta_int(4).value, 0.0},
            1e-12, "integer zeta vs pi^4/90"));
    }

    // The alternating zeta expansion must agree with its rational resummation.
    for (const double s : {-0.5, -0.2, 0.2, 0.5, 0.8}) {
        ParamSet p;
        p.s = Scalar{s, 0.0};
        out.reports.push_back(constant_report(
            "SERIES-EQUIV", p, rational_series(p.s, 1e-11),
            alternating_zeta_series(p.s, 1e-11), 1e-9,
            "alternating zeta form vs rational form"));
    }

    // Chained base sum -> base product -> catalog product.
    for (const double bval : {0.5, 1.0, 3.0}) {
        const ChainReport chain = verify_chain(Scalar{bval, 0.0}, 1e-8);
        for (const ChainLink& link : chain.links) {
            ParamSet p;
            p.b = chain.b;
            out.reports.push_back(constant_report("CHAIN", p, link.expected,
                                                  link.observed,
                                                  chain.tolerance, link.name));
        }
    }

    out.findings = cross_check_all(CrossCheckGrid{});

    std::set<std::string> covered;
    std::set<std::string> failed;
    for (const VerificationReport& rep : out.reports) {
        if (find_identity_if_exists(rep.id)) covered.insert(rep.id);
        if (rep.verdict == Verdict::fail) failed.insert(rep.id);
    }
    out.covered_ids.assign(covered.begin(), covered.end());
    std::set<std::string> preset_names;
    for (const CrossCheckReport& f : out.findings) preset_names.insert(f.preset);
    out.covered_presets.assign(preset_names.begin(), preset_names.end());
    out.failed_ids.assign(failed.begin(), failed.end());
    out.pass = out.failed_ids.empty();
    return out;
}

}  // namespace telescopia
