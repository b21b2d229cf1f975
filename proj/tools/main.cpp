// telescopia: evaluate, synthesize and verify telescoping identities.
//
// Exit codes: 0 success, 1 verification/convergence failure, 2 unknown
// identifier, 3 domain or function-class violation, 4 declared-class
// conflict, 64 usage error.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "telescopia/catalog.hpp"
#include "telescopia/evaluator.hpp"
#include "telescopia/generator.hpp"
#include "telescopia/report_io.hpp"
#include "telescopia/verify.hpp"
#include "telescopia/zeta_chain.hpp"

namespace ts = telescopia;

namespace {

ts::OutputFormat resolve_format(const std::string& name) {
    if (!name.empty()) return ts::parse_format(name);
    return isatty(fileno(stdout)) ? ts::OutputFormat::human
                                  : ts::OutputFormat::json;
}

std::int64_t default_max_terms() {
    const char* env = std::getenv("TELESCOPIA_MAX_TERMS");
    if (!env || !*env) return ts::TolerancePolicy{}.max_terms;
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end == env || *end != '\0' || v <= 0) {
        throw ts::invalid_input(
            "TELESCOPIA_MAX_TERMS must be a positive integer, got '" +
            std::string(env) + "'");
    }
    return v;
}

struct ParamFlags {
    std::string s, alpha, z;
    double r = 2.0;
    std::optional<std::int64_t> n;

    void attach(CLI::App* cmd, bool with_n = true) {
        cmd->add_option("--s", s, "parameter s (real or complex, e.g. 1+0.5i)");
        cmd->add_option("--alpha", alpha, "parameter alpha");
        cmd->add_option("--z", z, "parameter z (z-family identities)");
        cmd->add_option("--r", r, "exponent r");
        if (with_n) {
            cmd->add_option("--n", n, "term count (fixed-n mode / finite identities)");
        }
    }

    ts::ParamSet build() const {
        ts::ParamSet p;
        if (!s.empty()) p.s = ts::parse_scalar(s);
        if (!alpha.empty()) p.alpha = ts::parse_scalar(alpha);
        if (!z.empty()) p.z = ts::parse_scalar(z);
        p.r = r;
        if (n) p.n_terms = n;
        return p;
    }
};

struct PolicyFlags {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::int64_t max_terms = 0;  // 0 = env default

    void attach(CLI::App* cmd) {
        cmd->add_option("--rel-tol", rel_tol, "relative convergence tolerance");
        cmd->add_option("--abs-tol", abs_tol, "absolute convergence tolerance");
        cmd->add_option("--max-terms", max_terms,
                        "term budget (overrides TELESCOPIA_MAX_TERMS)");
    }

    ts::TolerancePolicy build() const {
        ts::TolerancePolicy p;
        p.rel_tol = rel_tol;
        p.abs_tol = abs_tol;
        p.max_terms = max_terms > 0 ? max_terms : default_max_terms();
        return p;
    }
};

ts::EvalMode parse_mode(const std::string& name) {
    if (name == "fixed-n" || name == "fixed_n") return ts::EvalMode::fixed_n;
    if (name == "to-tolerance" || name == "to_tolerance") {
        return ts::EvalMode::to_tolerance;
    }
    throw ts::invalid_input("unknown mode '" + name +
                            "' (expected fixed-n or to-tolerance)");
}

void require_not_csv(ts::OutputFormat fmt, const char* what) {
    if (fmt == ts::OutputFormat::csv) {
        throw ts::invalid_input(std::string("csv output is not defined for ") +
                                what);
    }
}

// ---- list -------------------------------------------------------------------

int run_list(const std::string& filter, ts::OutputFormat fmt) {
    require_not_csv(fmt, "list");
    std::vector<const ts::Identity*> rows;
    for (const ts::Identity& e : ts::catalog_entries()) {
        const bool keep =
            filter == "all" || (filter == "finite" && e.finite) ||
            (filter == "infinite" && !e.finite) ||
            (filter == "products" && e.kind == ts::Kind::product) ||
            (filter == "sums" && e.kind == ts::Kind::sum);
        if (keep) rows.push_back(&e);
    }
    if (fmt == ts::OutputFormat::json) {
        std::vector<std::string> items;
        items.reserve(rows.size());
        for (const ts::Identity* e : rows) {
            ts::JsonBuilder b;
            b.str("id", e->id)
                .str("kind", e->kind == ts::Kind::product ? "product" : "sum")
                .boolean("finite", e->finite)
                .integer("start_index", e->start_index)
                .str("domain", e->domain)
                .str("summary", e->summary);
            items.push_back(b.build());
        }
        std::printf("%s\n", ts::json_array(items).c_str());
        return 0;
    }
    for (const ts::Identity* e : rows) {
        std::printf("%-17s %-8s %-9s %s\n", e->id.c_str(),
                    e->kind == ts::Kind::product ? "product" : "sum",
                    e->finite ? "finite" : "infinite", e->summary.c_str());
        if (!e->domain.empty()) {
            std::printf("%-17s domain: %s\n", "", e->domain.c_str());
        }
    }
    return 0;
}

// ---- eval -------------------------------------------------------------------

int run_eval(const std::string& id, const ParamFlags& pf, const PolicyFlags& pol,
             const std::string& mode_name, bool no_accelerate, bool compensated,
             ts::OutputFormat fmt) {
    require_not_csv(fmt, "eval");
    const ts::Identity& ident = ts::find_identity(id);

    ts::EvaluationRequest req;
    req.identity = &ident;
    req.params = pf.build();
    req.policy = pol.build();
    req.accelerate = !no_accelerate;
    req.compensated = compensated;
    if (!mode_name.empty()) {
        req.mode = parse_mode(mode_name);
    } else if (ident.finite || pf.n) {
        req.mode = ts::EvalMode::fixed_n;
    } else {
        req.mode = ts::EvalMode::to_tolerance;
    }
    if (req.mode == ts::EvalMode::fixed_n && !ident.finite) {
        if (!pf.n) throw ts::invalid_input("fixed-n mode requires --n");
        req.n = pf.n;
    }

    const ts::ConvergenceResult res = ts::evaluate(req);
    const ts::Scalar closed = ident.finite || req.mode == ts::EvalMode::to_tolerance
                                  ? ident.lhs(req.params)
                                  : ident.partial_closed_form(*req.n, req.params);

    if (fmt == ts::OutputFormat::json) {
        ts::JsonBuilder b;
        b.str("id", ident.id)
            .str("mode", req.mode == ts::EvalMode::fixed_n ? "fixed-n"
                                                           : "to-tolerance")
            .raw("params", ts::params_json(req.params))
            .scalar("value", res.value)
            .scalar("closed_form", closed)
            .integer("terms_used", res.terms_used)
            .num("est_error", res.est_error)
            .boolean("converged", res.converged);
        std::printf("%s\n", b.build().c_str());
    } else {
        std::printf("%s  mode=%s\n", ident.id.c_str(),
                    req.mode == ts::EvalMode::fixed_n ? "fixed-n" : "to-tolerance");
        std::printf("  value       = %s\n", ts::format_scalar(res.value).c_str());
        std::printf("  closed form = %s\n", ts::format_scalar(closed).c_str());
        std::printf("  terms used  = %lld\n",
                    static_cast<long long>(res.terms_used));
        std::printf("  est error   = %.3g\n", res.est_error);
        std::printf("  converged   = %s\n", res.converged ? "yes" : "no");
    }
    // A fixed-n evaluation is exact at its own term count; only a
    // to-tolerance run can fail to converge.
    if (req.mode == ts::EvalMode::to_tolerance && !res.converged) return 1;
    return 0;
}

// ---- synthesize ---------------------------------------------------------------

ts::AsymptoticClass parse_declare(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string args =
        colon == std::string::npos ? std::string() : text.substr(colon + 1);
    if (kind == "power-law") {
        const auto comma = args.find(',');
        if (comma == std::string::npos) {
            throw ts::invalid_input("--declare power-law wants C0,r");
        }
        ts::PowerLaw pl;
        pl.C0 = ts::parse_scalar(args.substr(0, comma)).real();
        pl.r = ts::parse_scalar(args.substr(comma + 1)).real();
        return pl;
    }
    if (kind == "saturating") {
        if (args.empty()) throw ts::invalid_input("--declare saturating wants L");
        return ts::Saturating{ts::parse_scalar(args).real()};
    }
    throw ts::invalid_input(
        "--declare expects power-law:C0,r or saturating:L, got '" + text + "'");
}

std::string class_text(const ts::AsymptoticClass& cls) {
    if (std::holds_alternative<ts::PowerLaw>(cls)) {
        const ts::PowerLaw& pl = std::get<ts::PowerLaw>(cls);
        return "power-law (C0=" + ts::format_double(pl.C0) +
               ", r=" + ts::format_double(pl.r) + ")";
    }
    return "saturating (L=" +
           ts::format_double(std::get<ts::Saturating>(cls).L) + ")";
}

int run_synthesize(const std::string& preset_name, const std::string& alpha_text,
                   const std::string& s_text, const std::string& declare_text,
                   ts::OutputFormat fmt) {
    require_not_csv(fmt, "synthesize");
    const ts::Preset& preset = ts::find_preset(preset_name);
    ts::GeneratorFunction f = preset.f;
    if (!declare_text.empty()) f.declared = parse_declare(declare_text);

    const ts::Scalar alpha =
        alpha_text.empty() ? ts::Scalar{1.0, 0.0} : ts::parse_scalar(alpha_text);
    const ts::Scalar s =
        s_text.empty() ? ts::Scalar{2.0, 0.0} : ts::parse_scalar(s_text);

    const ts::GeneratedIdentity gen = ts::synthesize(f, alpha);

    // Brute partial against the closed partial form: immediate evidence the
    // synthesized product telescopes.
    ts::Scalar brute{1.0, 0.0};
    for (std::int64_t k = 2; k <= 50; ++k) brute *= gen.term(k, s);
    brute *= gen.beta;
    const double check = std::abs(brute - gen.partial_closed_form(50, s));

    if (fmt == ts::OutputFormat::json) {
        ts::JsonBuilder b;
        b.str("preset", preset.f.name)
            .str("class", class_text(gen.cls))
            .scalar("alpha", gen.alpha)
            .scalar("beta", gen.beta)
            .scalar("s", s)
            .scalar("infinite_value", gen.infinite_value(s))
            .num("telescoping_check_n50", check);
        std::printf("%s\n", b.build().c_str());
    } else {
        std::printf("preset            = %s\n", preset.f.name.c_str());
        std::printf("class             = %s\n", class_text(gen.cls).c_str());
        std::printf("alpha             = %s\n", ts::format_scalar(gen.alpha).c_str());
        std::printf("beta              = %s\n", ts::format_scalar(gen.beta).c_str());
        std::printf("value at s=%s: %s\n", ts::format_scalar(s).c_str(),
                    ts::format_scalar(gen.infinite_value(s)).c_str());
        std::printf("telescoping check (N=50) = %.3g\n", check);
    }
    return 0;
}

// ---- verify -------------------------------------------------------------------

void print_reports_human(const std::vector<ts::VerificationReport>& reports) {
    for (const ts::VerificationReport& rep : reports) {
        std::string head = rep.id;
        if (rep.n) head += " n=" + std::to_string(*rep.n);
        std::printf("%-34s %-20s expected=%s observed=%s abs_err=%.3g %s\n",
                    head.c_str(),
                    ("s=" + ts::format_scalar(rep.params.s)).c_str(),
                    ts::format_scalar(rep.expected).c_str(),
                    ts::format_scalar(rep.observed).c_str(), rep.abs_err,
                    ts::to_string(rep.verdict));
        if (!rep.note.empty() && rep.verdict != ts::Verdict::pass) {
            std::printf("    note: %s\n", rep.note.c_str());
        }
    }
}

int run_verify_all(int threads, ts::OutputFormat fmt) {
    ts::RegressionOptions opts;
    opts.threads = threads;
    const ts::RegressionResult result = ts::regression_suite(opts);

    if (fmt == ts::OutputFormat::json) {
        std::printf("%s\n", ts::to_json(result).c_str());
    } else if (fmt == ts::OutputFormat::csv) {
        std::fputs(ts::to_csv(result.reports).c_str(), stdout);
    } else {
        int pass = 0;
        int fail = 0;
        int skip = 0;
        for (const ts::VerificationReport& rep : result.reports) {
            switch (rep.verdict) {
                case ts::Verdict::pass: ++pass; break;
                case ts::Verdict::fail: ++fail; break;
                default: ++skip; break;
            }
        }
        std::printf("reports: %zu  (pass %d, fail %d, skipped %d)\n",
                    result.reports.size(), pass, fail, skip);
        std::printf("covered identities: %zu, presets: %zu\n",
                    result.covered_ids.size(), result.covered_presets.size());
        for (const ts::CrossCheckReport& f : result.findings) {
            std::printf(
                "finding: %s/%s transcription %s the derived form "
                "(max rel diff %.3g at k=%lld, s=%s, alpha=%s) [reported only]\n",
                f.preset.c_str(), f.variant.c_str(),
                f.matched ? "matches" : "disagrees with", f.max_rel_diff,
                static_cast<long long>(f.worst.k),
                ts::format_scalar(f.worst.s).c_str(),
                ts::format_scalar(f.worst.alpha).c_str());
        }
        if (fail > 0) {
            for (const ts::VerificationReport& rep : result.reports) {
                if (rep.verdict == ts::Verdict::fail) {
                    std::printf("FAIL %s s=%s abs_err=%.3g %s\n", rep.id.c_str(),
                                ts::format_scalar(rep.params.s).c_str(),
                                rep.abs_err, rep.note.c_str());
                }
            }
        }
        std::printf("overall: %s\n", result.pass ? "PASS" : "FAIL");
    }
    return result.pass ? 0 : 1;
}

int run_verify_one(const std::string& id, const ParamFlags& pf,
                   const std::string& mode_name, double tolerance,
                   const PolicyFlags& pol, ts::OutputFormat fmt) {
    const ts::Identity& ident = ts::find_identity(id);
    ts::EvalMode mode;
    if (!mode_name.empty()) {
        mode = parse_mode(mode_name);
    } else {
        mode = (ident.finite || pf.n) ? ts::EvalMode::fixed_n
                                      : ts::EvalMode::to_tolerance;
    }
    const ts::VerificationReport rep =
        ts::verify_one(ident, pf.build(), mode, pf.n, tolerance, pol.build());

    if (fmt == ts::OutputFormat::json) {
        std::printf("%s\n", ts::to_json(rep).c_str());
    } else if (fmt == ts::OutputFormat::csv) {
        std::printf("%s\n%s\n", ts::csv_header().c_str(),
                    ts::to_csv_row(rep).c_str());
    } else {
        print_reports_human({rep});
    }
    return rep.verdict == ts::Verdict::fail ? 1 : 0;
}

// ---- sweep --------------------------------------------------------------------

int run_sweep(const std::string& spec_path, int threads, ts::OutputFormat fmt) {
    std::string text;
    if (spec_path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream in(spec_path);
        if (!in) {
            throw ts::invalid_input("cannot open sweep spec '" + spec_path + "'");
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    const ts::SweepSpec spec = ts::parse_sweep_spec(text);
    ts::SweepOptions opts;
    opts.threads = threads;
    const std::vector<ts::VerificationReport> reports = ts::sweep(spec, opts);

    bool any_fail = false;
    for (const ts::VerificationReport& rep : reports) {
        any_fail = any_fail || rep.verdict == ts::Verdict::fail;
    }
    if (fmt == ts::OutputFormat::json) {
        std::printf("%s\n", ts::reports_json(reports).c_str());
    } else if (fmt == ts::OutputFormat::csv) {
        std::fputs(ts::to_csv(reports).c_str(), stdout);
    } else {
        print_reports_human(reports);
        std::printf("%zu reports, %s\n", reports.size(),
                    any_fail ? "FAIL" : "all pass/skip");
    }
    return any_fail ? 1 : 0;
}

// ---- appendix -------------------------------------------------------------------

int run_appendix(std::vector<double> b_values, std::vector<int> zeta_orders,
                 std::vector<double> equiv_s, double tol, ts::OutputFormat fmt) {
    require_not_csv(fmt, "appendix");
    if (b_values.empty()) b_values = {0.5, 1.0, 3.0};
    if (zeta_orders.empty()) zeta_orders = {2, 4};
    if (equiv_s.empty()) equiv_s = {-0.5, -0.2, 0.2, 0.5, 0.8};

    bool all_pass = true;

    std::vector<std::string> zeta_json;
    std::vector<ts::ZetaValue> zetas;
    for (const int n : zeta_orders) {
        zetas.push_back(ts::zeta_int(n, 1e-12));
    }

    std::vector<std::string> equiv_json;
    struct EquivRow {
        double s, diff;
        bool pass;
    };
    std::vector<EquivRow> equivs;
    for (const double s : equiv_s) {
        const ts::Scalar sv{s, 0.0};
        const double diff = std::abs(ts::alternating_zeta_series(sv, 1e-11) -
                                     ts::rational_series(sv, 1e-11));
        const bool pass = diff <= 1e-9;
        all_pass = all_pass && pass;
        equivs.push_back({s, diff, pass});
    }

    std::vector<ts::ChainReport> chains;
    for (const double b : b_values) {
        chains.push_back(ts::verify_chain(ts::Scalar{b, 0.0}, tol));
        all_pass = all_pass && chains.back().all_pass;
    }

    if (fmt == ts::OutputFormat::json) {
        for (const ts::ZetaValue& z : zetas) {
            ts::JsonBuilder b;
            b.integer("n", z.n).num("value", z.value).num("tail_bound",
                                                          z.tail_bound);
            zeta_json.push_back(b.build());
        }
        for (const EquivRow& row : equivs) {
            ts::JsonBuilder b;
            b.num("s", row.s).num("abs_diff", row.diff).boolean("pass", row.pass);
            equiv_json.push_back(b.build());
        }
        std::vector<std::string> chain_json;
        for (const ts::ChainReport& c : chains) chain_json.push_back(ts::to_json(c));
        ts::JsonBuilder b;
        b.raw("zeta", ts::json_array(zeta_json))
            .raw("series_equivalence", ts::json_array(equiv_json))
            .raw("chains", ts::json_array(chain_json))
            .boolean("all_pass", all_pass);
        std::printf("%s\n", b.build().c_str());
    } else {
        for (const ts::ZetaValue& z : zetas) {
            std::printf("zeta(%d) = %.15g  (tail bound %.3g)\n", z.n, z.value,
                        z.tail_bound);
        }
        for (const EquivRow& row : equivs) {
            std::printf("series equivalence at s=%g: |diff| = %.3g  %s\n", row.s,
                        row.diff, row.pass ? "pass" : "FAIL");
        }
        for (const ts::ChainReport& c : chains) {
            std::printf("chain b=%s (tol %.1g): %s\n",
                        ts::format_scalar(c.b).c_str(), c.tolerance,
                        c.all_pass ? "pass" : "FAIL");
            for (const ts::ChainLink& link : c.links) {
                std::printf("  %-34s expected=%s observed=%s err=%.3g %s\n",
                            link.name.c_str(),
                            ts::format_scalar(link.expected).c_str(),
                            ts::format_scalar(link.observed).c_str(),
                            link.abs_err, link.pass ? "pass" : "FAIL");
            }
        }
        std::printf("overall: %s\n", all_pass ? "PASS" : "FAIL");
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"telescoping product/sum identities: evaluate, synthesize, verify"};
    app.set_version_flag("--version", "0.1.0");
    app.require_subcommand(1);
    app.fallthrough();  // allow global options (e.g. --format) after a subcommand

    std::string format_name;
    app.add_option("--format", format_name,
                   "output format: human, json, csv (default: human on a "
                   "terminal, json otherwise)")
        ->envname("TELESCOPIA_FORMAT");

    std::function<int()> action;

    // list
    {
        CLI::App* cmd = app.add_subcommand("list", "list catalog identities");
        auto filter = std::make_shared<std::string>("all");
        cmd->add_option("--filter", *filter, "all, finite, infinite, products, sums")
            ->check(CLI::IsMember({"all", "finite", "infinite", "products", "sums"}));
        cmd->callback([&action, filter, &format_name]() {
            action = [filter, &format_name]() {
                return run_list(*filter, resolve_format(format_name));
            };
        });
    }

    // eval
    {
        CLI::App* cmd = app.add_subcommand("eval", "evaluate one identity");
        auto id = std::make_shared<std::string>();
        auto pf = std::make_shared<ParamFlags>();
        auto pol = std::make_shared<PolicyFlags>();
        auto mode = std::make_shared<std::string>();
        auto no_accel = std::make_shared<bool>(false);
        auto compensated = std::make_shared<bool>(false);
        cmd->add_option("id", *id, "catalog identity id")->required();
        pf->attach(cmd);
        pol->attach(cmd);
        cmd->add_option("--mode", *mode, "fixed-n or to-tolerance");
        cmd->add_flag("--no-accelerate", *no_accel,
                      "disable checkpoint extrapolation");
        cmd->add_flag("--compensated", *compensated,
                      "compensated (Neumaier) summation for sums");
        cmd->callback([&action, id, pf, pol, mode, no_accel, compensated,
                       &format_name]() {
            action = [=, &format_name]() {
                return run_eval(*id, *pf, *pol, *mode, *no_accel, *compensated,
                                resolve_format(format_name));
            };
        });
    }

    // synthesize
    {
        CLI::App* cmd =
            app.add_subcommand("synthesize", "build a product from a preset function");
        auto preset = std::make_shared<std::string>();
        auto alpha = std::make_shared<std::string>();
        auto s = std::make_shared<std::string>();
        auto declare = std::make_shared<std::string>();
        cmd->add_option("preset", *preset,
                        "frac-square, tanh, x-tanh, x-arctan, x-exp")
            ->required();
        cmd->add_option("--alpha", *alpha, "shift parameter (default 1)");
        cmd->add_option("--s", *s, "scale for the reported value (default 2)");
        cmd->add_option("--declare", *declare,
                        "override the declared class: power-law:C0,r or "
                        "saturating:L");
        cmd->callback([&action, preset, alpha, s, declare, &format_name]() {
            action = [=, &format_name]() {
                return run_synthesize(*preset, *alpha, *s, *declare,
                                      resolve_format(format_name));
            };
        });
    }

    // verify
    {
        CLI::App* cmd = app.add_subcommand("verify",
                                           "check identities numerically");
        auto all = std::make_shared<bool>(false);
        auto id = std::make_shared<std::string>();
        auto pf = std::make_shared<ParamFlags>();
        auto pol = std::make_shared<PolicyFlags>();
        auto mode = std::make_shared<std::string>();
        auto tolerance = std::make_shared<double>(1e-10);
        auto threads = std::make_shared<int>(1);
        cmd->add_flag("--all", *all, "run the full regression suite");
        cmd->add_option("--id", *id, "verify a single identity");
        pf->attach(cmd);
        pol->attach(cmd);
        cmd->add_option("--mode", *mode, "fixed-n or to-tolerance");
        cmd->add_option("--tolerance", *tolerance, "pass/fail tolerance");
        cmd->add_option("--threads", *threads, "worker threads");
        cmd->callback([&action, all, id, pf, pol, mode, tolerance, threads,
                       &format_name]() {
            action = [=, &format_name]() {
                const ts::OutputFormat fmt = resolve_format(format_name);
                if (*all != id->empty()) {
                    throw ts::invalid_input(
                        "verify wants exactly one of --all or --id");
                }
                if (*all) return run_verify_all(*threads, fmt);
                return run_verify_one(*id, *pf, *mode, *tolerance, *pol, fmt);
            };
        });
    }

    // sweep
    {
        CLI::App* cmd = app.add_subcommand("sweep", "run a sweep spec (JSON)");
        auto spec = std::make_shared<std::string>();
        auto threads = std::make_shared<int>(1);
        cmd->add_option("--spec", *spec, "path to the spec file, or - for stdin")
            ->required();
        cmd->add_option("--threads", *threads, "worker threads");
        cmd->callback([&action, spec, threads, &format_name]() {
            action = [=, &format_name]() {
                return run_sweep(*spec, *threads, resolve_format(format_name));
            };
        });
    }

    // appendix
    {
        CLI::App* cmd = app.add_subcommand(
            "appendix", "integer zeta values, series equivalence, chained checks");
        auto b_values = std::make_shared<std::vector<double>>();
        auto zeta_orders = std::make_shared<std::vector<int>>();
        auto equiv_s = std::make_shared<std::vector<double>>();
        auto tol = std::make_shared<double>(1e-8);
        cmd->add_option("--b", *b_values, "chain parameter(s)");
        cmd->add_option("--zeta", *zeta_orders, "zeta order(s), n >= 2");
        cmd->add_option("--equiv-s", *equiv_s, "series-equivalence points");
        cmd->add_option("--tol", *tol, "chain tolerance");
        cmd->callback([&action, b_values, zeta_orders, equiv_s, tol,
                       &format_name]() {
            action = [=, &format_name]() {
                return run_appendix(*b_values, *zeta_orders, *equiv_s, *tol,
                                    resolve_format(format_name));
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 64;
    }

    try {
        return action ? action() : 64;
    } catch (const ts::unknown_identifier& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ts::classification_conflict& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const ts::domain_error& e) {
        std::fprintf(stderr, "error: %s (needs %s)\n", e.what(),
                     e.constraint.c_str());
        return 3;
    } catch (const ts::singularity_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const ts::unsupported_function& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const ts::capability_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const ts::invalid_input& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 64;
    } catch (const ts::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
