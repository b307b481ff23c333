// Scenario files (JSON) and run outputs.
//
// Angles may be given in degrees (`*_deg` keys) or radians; emitted files use
// radians so that load -> emit -> load reproduces the scenario exactly.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "conepoint/simulation.hpp"

namespace conepoint {

struct LoadedScenario {
  Scenario scenario;
  std::vector<std::string> warnings;  // unit-vector corrections, rule warnings
};

// Unit vectors further than this from norm 1 are normalized with a warning.
inline constexpr double kNormalizeWarnThreshold = 1e-6;

// Throws ValidationError listing every schema or physics issue by field path.
LoadedScenario scenario_from_json(const nlohmann::json& j);
// Throws ParseError for malformed JSON text, then as scenario_from_json.
LoadedScenario scenario_from_text(std::string_view text);
// Reads a file, or resolves a preset name (see presets.hpp) when `source`
// is one. Throws ParseError when the file cannot be read.
LoadedScenario load_scenario(const std::string& source);

nlohmann::json scenario_to_json(const Scenario& scenario);
nlohmann::json summary_to_json(const Summary& summary);
nlohmann::json report_to_json(const ValidationReport& report);

}  // namespace conepoint
