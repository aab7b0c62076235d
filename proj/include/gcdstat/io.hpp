#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gcdstat/continuity.hpp"
#include "gcdstat/density.hpp"
#include "gcdstat/kernel.hpp"
#include "gcdstat/lacunary.hpp"
#include "gcdstat/theorems.hpp"

// JSON and CSV renderings. Parsers throw std::invalid_argument (or nlohmann::json::exception
// for structurally wrong documents).
namespace gcdstat::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kCurveHeader = "axis,index,epsilon,witness_n,density";

// Shortest round-trip decimal form.
std::string format_number(double v);

std::string to_string(Axis axis);
std::string to_string(Outcome outcome);

json to_json(const GeneratorSpec& spec);
GeneratorSpec generator_from_json(const json& j);

// Accepts [k0, k1, ...], {"points": [...]}, {"geometric": {"ratio", "count", "start"}},
// {"polynomial": {"degree", "count"}} or {"factorial": {"count"}}.
LacunaryScheme scheme_from_json(const json& j);
json to_json(const LacunaryScheme& scheme);

json to_json(const RealFunction& f);
RealFunction function_from_json(const json& j);

json to_json(const RatioStats& stats);
json to_json(const ConvergenceVerdict& verdict);
json to_json(const SchemeRelation& relation);
json to_json(const CheckReport& report);
json to_json(const InclusionExperiment& experiment);
json to_json(const SuiteResult& suite);
json to_json(const ContinuityReport& report);

// One row per curve point: axis,index,epsilon,witness_n,density (no header).
void write_curve_rows(std::ostream& out, const DensityCurve& curve, double eps, Index witness_n);

// One finite value per nonblank line. Throws std::invalid_argument on bad lines or no values.
std::vector<double> read_sequence_csv(std::istream& in);

}  // namespace gcdstat::io
