#pragma once

#include "bp/engine.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace bp {

using Json = nlohmann::ordered_json;

inline constexpr const char* kScenarioSchema = "bp/1";
inline constexpr const char* kReportSchema = "bp-report/1";

/// Parses scenario text. Syntax errors report line and column; schema errors
/// name the offending field path. Unknown fields are rejected.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
Scenario scenario_from_json(const Json& doc);

/// Canonical form: fixed key order, every default materialized.
Json scenario_to_json(const Scenario& s);

/// `dim` is used by presets that do not carry their own dimension.
StarBody body_from_json(const Json& j, int dim, const std::string& path = "body");
Json body_to_json(const StarBody& body);

Json report_to_json(const VerificationReport& report);

/// JSON text with every floating-point number printed with 17 significant
/// digits, two-space indentation and a trailing newline.
std::string dump_json(const Json& j);

/// Per-ξ margins: index, coordinates, margin.
std::string section_profile_csv(const HypothesisResult& result, int dim);

/// Built-in scenario ids, exactly as accepted by `bp example`.
const std::vector<std::string>& builtin_ids();
/// Accepts the ids with or without the "example-" prefix. eps only affects
/// example-3.3. Throws validation error for an unknown id.
Scenario builtin_scenario(const std::string& id, std::optional<double> eps = std::nullopt);

/// Largest a with all Example 3.3 section margins >= 0 for K = ball(1),
/// L = ellipsoid(a, a, 1.3) at the given ε, found by bisection.
double example33_semiaxis(double eps);

/// Frozen result of example33_semiaxis(0.1) minus a 1e-4 safety gap.
inline constexpr double kExample33Semiaxis = 0.6944750368971001;

}  // namespace bp
