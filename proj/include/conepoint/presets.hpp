// Built-in scenarios: the reference single-, two- and three-obstacle geometries
// and the proposed-vs-benchmark comparison. Geometry lives in code; gains and
// cone angles come from a tuning document (data/reference_tuning.json is
// embedded at build time and can be swapped at runtime).
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "conepoint/scenario_io.hpp"

namespace conepoint {

struct PresetInfo {
  std::string name;
  std::string description;
};

// Stable order.
std::vector<PresetInfo> list_presets();
bool is_preset(std::string_view name);

const nlohmann::json& reference_tuning();

// Scenario JSON for a preset with `tuning` applied. Throws InvalidInput for
// an unknown name.
nlohmann::json preset_json(std::string_view name, const nlohmann::json& tuning);
LoadedScenario load_preset(std::string_view name, const nlohmann::json& tuning = reference_tuning());

}  // namespace conepoint
