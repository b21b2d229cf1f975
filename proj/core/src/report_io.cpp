#include "telescopia/report_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <json.hpp>

namespace telescopia {
namespace {

std::string trim(const std::string& text) {
    std::size_t a = 0;
    std::size_t b = text.size();
    while (a < b && std::isspace(static_cast<unsigned char>(text[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(text[b - 1]))) --b;
    return text.substr(a, b - a);
}

[[noreturn]] void bad_scalar(const std::string& text) {
    throw invalid_input("cannot parse scalar '" + text +
                        "' (expected forms: 2, -0.5, 1+0.5i, 2-i, 0.5i)");
}

const char* mode_name(EvalMode mode) {
    return mode == EvalMode::fixed_n ? "fixed-n" : "to-tolerance";
}

}  // namespace

Scalar parse_scalar(const std::string& raw) {
    const std::string t = trim(raw);
    if (t.empty()) bad_scalar(raw);
    const char* p = t.c_str();
    char* end = nullptr;

    const double first = std::strtod(p, &end);
    if (end == p) {
        // no leading number: allow i, +i, -i
        double sign = 1.0;
        const char* q = p;
        if (*q == '+' || *q == '-') {
            sign = (*q == '-') ? -1.0 : 1.0;
            ++q;
        }
        if (*q == 'i' && q[1] == '\0') return {0.0, sign};
        bad_scalar(raw);
    }
    if (*end == '\0') return {first, 0.0};
    if (*end == 'i') {
        if (end[1] != '\0') bad_scalar(raw);
        return {0.0, first};
    }
    if (*end != '+' && *end != '-') bad_scalar(raw);

    const char* p2 = end;
    if (p2[1] == 'i' && p2[2] == '\0') {
        return {first, (*p2 == '-') ? -1.0 : 1.0};
    }
    char* end2 = nullptr;
    const double second = std::strtod(p2, &end2);
    if (end2 == p2 || *end2 != 'i' || end2[1] != '\0') bad_scalar(raw);
    return {first, second};
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string format_scalar(Scalar v) {
    if (v.imag() == 0.0) return format_double(v.real());
    std::string out = format_double(v.real());
    out += (v.imag() < 0.0) ? '-' : '+';
    out += format_double(std::abs(v.imag()));
    out += 'i';
    return out;
}

OutputFormat parse_format(const std::string& name) {
    if (name == "human") return OutputFormat::human;
    if (name == "json") return OutputFormat::json;
    if (name == "csv") return OutputFormat::csv;
    throw invalid_input("unknown output format '" + name +
                        "' (expected human, json or csv)");
}

std::string json_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size() + 2);
    for (const char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

JsonBuilder& JsonBuilder::raw(const std::string& key, const std::string& raw_json) {
    fields_.emplace_back(key, raw_json);
    return *this;
}

JsonBuilder& JsonBuilder::str(const std::string& key, const std::string& value) {
    return raw(key, "\"" + json_escape(value) + "\"");
}

JsonBuilder& JsonBuilder::num(const std::string& key, double value) {
    // JSON has no Infinity/NaN literals.
    if (!std::isfinite(value)) return raw(key, "null");
    return raw(key, format_double(value));
}

JsonBuilder& JsonBuilder::integer(const std::string& key, std::int64_t value) {
    return raw(key, std::to_string(value));
}

JsonBuilder& JsonBuilder::boolean(const std::string& key, bool value) {
    return raw(key, value ? "true" : "false");
}

JsonBuilder& JsonBuilder::scalar(const std::string& key, Scalar value) {
    return raw(key, scalar_json(value));
}

std::string JsonBuilder::build() const {
    std::string out = "{";
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (i) out += ',';
        out += "\"" + json_escape(fields_[i].first) + "\":" + fields_[i].second;
    }
    out += '}';
    return out;
}

std::string json_array(const std::vector<std::string>& elements) {
    std::string out = "[";
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (i) out += ',';
        out += elements[i];
    }
    out += ']';
    return out;
}

std::string scalar_json(Scalar v) {
    const auto part = [](double x) {
        return std::isfinite(x) ? format_double(x) : std::string("null");
    };
    return "[" + part(v.real()) + "," + part(v.imag()) + "]";
}

std::string params_json(const ParamSet& p) {
    JsonBuilder b;
    b.scalar("s", p.s).scalar("alpha", p.alpha).num("r", p.r);
    if (p.n_terms) {
        b.integer("n_terms", *p.n_terms);
    } else {
        b.raw("n_terms", "null");
    }
    b.scalar("z", p.z).scalar("b", p.b);
    return b.build();
}

std::string to_json(const VerificationReport& rep) {
    JsonBuilder b;
    b.str("id", rep.id).str("mode", mode_name(rep.mode));
    if (rep.n) {
        b.integer("n", *rep.n);
    } else {
        b.raw("n", "null");
    }
    b.raw("params", params_json(rep.params))
        .scalar("expected", rep.expected)
        .scalar("observed", rep.observed)
        .num("abs_err", rep.abs_err)
        .num("rel_err", rep.rel_err)
        .num("tolerance", rep.tolerance)
        .boolean("converged", rep.converged)
        .str("verdict", to_string(rep.verdict))
        .str("note", rep.note);
    return b.build();
}

std::string to_json(const CrossCheckReport& rep) {
    JsonBuilder worst;
    worst.integer("k", rep.worst.k)
        .scalar("s", rep.worst.s)
        .scalar("alpha", rep.worst.alpha)
        .scalar("transcribed", rep.worst.transcribed)
        .scalar("derived", rep.worst.derived)
        .num("abs_diff", rep.worst.abs_diff)
        .num("rel_diff", rep.worst.rel_diff);

    JsonBuilder b;
    b.str("preset", rep.preset)
        .str("variant", rep.variant)
        .num("threshold", rep.threshold)
        .integer("points", static_cast<std::int64_t>(rep.points.size()))
        .num("max_abs_diff", rep.max_abs_diff)
        .num("max_rel_diff", rep.max_rel_diff)
        .boolean("matched", rep.matched)
        .raw("worst", worst.build());
    return b.build();
}

std::string to_json(const ChainReport& rep) {
    std::vector<std::string> links;
    links.reserve(rep.links.size());
    for (const ChainLink& link : rep.links) {
        JsonBuilder lb;
        lb.str("name", link.name)
            .scalar("expected", link.expected)
            .scalar("observed", link.observed)
            .num("abs_err", link.abs_err)
            .boolean("pass", link.pass);
        links.push_back(lb.build());
    }
    JsonBuilder b;
    b.scalar("b", rep.b)
        .num("tolerance", rep.tolerance)
        .boolean("all_pass", rep.all_pass)
        .raw("links", json_array(links));
    return b.build();
}

std::string reports_json(std::span<const VerificationReport> reports) {
    std::vector<std::string> rows;
    rows.reserve(reports.size());
    for (const VerificationReport& rep : reports) rows.push_back(to_json(rep));
    return json_array(rows);
}

std::string to_json(const RegressionResult& result) {
    std::vector<std::string> findings;
    findings.reserve(result.findings.size());
    for (const CrossCheckReport& f : result.findings) {
        findings.push_back(to_json(f));
    }
    auto strings = [](const std::vector<std::string>& xs) {
        std::vector<std::string> out;
        out.reserve(xs.size());
        for (const std::string& x : xs) out.push_back("\"" + json_escape(x) + "\"");
        return out;
    };
    JsonBuilder b;
    b.boolean("pass", result.pass)
        .integer("report_count", static_cast<std::int64_t>(result.reports.size()))
        .raw("failed_ids", json_array(strings(result.failed_ids)))
        .raw("covered_ids", json_array(strings(result.covered_ids)))
        .raw("covered_presets", json_array(strings(result.covered_presets)))
        .raw("findings", json_array(findings))
        .raw("reports", reports_json(result.reports));
    return b.build();
}

std::string csv_header() {
    return "id,s,alpha,r,n,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,verdict";
}

std::string to_csv_row(const VerificationReport& rep) {
    Scalar primary = rep.params.s;
    if (rep.id == "PROD-Z" || rep.id == "SUM-Z") primary = rep.params.z;
    if (rep.id == "CHAIN") primary = rep.params.b;

    std::string n_text;
    if (rep.n) {
        n_text = std::to_string(*rep.n);
    } else if (rep.params.n_terms) {
        n_text = std::to_string(*rep.params.n_terms);
    }

    std::string out;
    out += rep.id;
    out += ',';
    out += format_scalar(primary);
    out += ',';
    out += format_scalar(rep.params.alpha);
    out += ',';
    out += format_double(rep.params.r);
    out += ',';
    out += n_text;
    out += ',';
    out += format_double(rep.expected.real());
    out += ',';
    out += format_double(rep.expected.imag());
    out += ',';
    out += format_double(rep.observed.real());
    out += ',';
    out += format_double(rep.observed.imag());
    out += ',';
    out += format_double(rep.abs_err);
    out += ',';
    out += format_double(rep.rel_err);
    out += ',';
    out += to_string(rep.verdict);
    return out;
}

std::string to_csv(std::span<const VerificationReport> reports) {
    std::string out = csv_header();
    out += '\n';
    for (const VerificationReport& rep : reports) {
        out += to_csv_row(rep);
        out += '\n';
    }
    return out;
}

SweepSpec parse_sweep_spec(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw invalid_input(std::string("sweep spec is not valid JSON: ") +
                            e.what());
    }
    try {
        SweepSpec spec;
        spec.identity = doc.at("identity").get<std::string>();

        const std::string mode = doc.value("mode", std::string("fixed-n"));
        if (mode == "fixed-n" || mode == "fixed_n") {
            spec.mode = EvalMode::fixed_n;
        } else if (mode == "to-tolerance" || mode == "to_tolerance") {
            spec.mode = EvalMode::to_tolerance;
        } else {
            throw invalid_input("sweep spec: unknown mode '" + mode + "'");
        }
        spec.tolerance = doc.value("tolerance", 1e-10);

        const nlohmann::json& grid = doc.at("grid");
        if (!grid.is_object()) {
            throw invalid_input("sweep spec: grid must be an object");
        }
        for (const auto& [key, values] : grid.items()) {
            if (!values.is_array() || values.empty()) {
                throw invalid_input("sweep spec: axis '" + key +
                                    "' must be a non-empty array");
            }
            SweepAxis axis{key, {}};
            for (const nlohmann::json& v : values) {
                if (v.is_number()) {
                    axis.second.emplace_back(v.get<double>(), 0.0);
                } else if (v.is_string()) {
                    axis.second.push_back(parse_scalar(v.get<std::string>()));
                } else {
                    throw invalid_input("sweep spec: axis '" + key +
                                        "' holds a non-numeric entry");
                }
            }
            spec.axes.push_back(std::move(axis));
        }
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw invalid_input(std::string("sweep spec is malformed: ") + e.what());
    }
}

}  // namespace telescopia
