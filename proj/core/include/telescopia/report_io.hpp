// Text I/O: complex-scalar parsing/formatting, a deterministic JSON writer,
// CSV report rows, and sweep-spec parsing.
#ifndef TELESCOPIA_REPORT_IO_HPP
#define TELESCOPIA_REPORT_IO_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "telescopia/verify.hpp"
#include "telescopia/zeta_chain.hpp"

namespace telescopia {

// Accepts "2", "-0.5", "1+0.5i", "2-i", "0.5i", "i", "-i".
Scalar parse_scalar(const std::string& text);

// Round-trip double formatting (%.17g), used by every serialized number.
std::string format_double(double x);

// "a" for real values, "a+bi" / "a-bi" otherwise.
std::string format_scalar(Scalar v);

enum class OutputFormat { human, json, csv };

// "human", "json" or "csv"; anything else throws invalid_input.
OutputFormat parse_format(const std::string& name);

std::string json_escape(const std::string& text);

// Minimal deterministic JSON object writer; fields appear in insertion order.
class JsonBuilder {
public:
    JsonBuilder& raw(const std::string& key, const std::string& raw_json);
    JsonBuilder& str(const std::string& key, const std::string& value);
    JsonBuilder& num(const std::string& key, double value);
    JsonBuilder& integer(const std::string& key, std::int64_t value);
    JsonBuilder& boolean(const std::string& key, bool value);
    JsonBuilder& scalar(const std::string& key, Scalar value);  // [re, im]
    std::string build() const;

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

std::string json_array(const std::vector<std::string>& elements);
std::string scalar_json(Scalar v);
std::string params_json(const ParamSet& p);

std::string to_json(const VerificationReport& rep);
std::string to_json(const CrossCheckReport& rep);
std::string to_json(const ChainReport& rep);
std::string to_json(const RegressionResult& result);
std::string reports_json(std::span<const VerificationReport> reports);

// Header is fixed; the s column carries z for the z-family identities and b
// for chain rows.
std::string csv_header();
std::string to_csv_row(const VerificationReport& rep);
std::string to_csv(std::span<const VerificationReport> reports);

// {"identity": "...", "grid": {"s": [0.5, "1+0.5i"], ...},
//  "mode": "fixed-n" | "to-tolerance", "tolerance": 1e-10}
SweepSpec parse_sweep_spec(const std::string& json_text);

}  // namespace telescopia

#endif
