#include "conepoint/presets.hpp"

#include <algorithm>

#include "conepoint/errors.hpp"
#include "reference_tuning.hpp"

namespace conepoint {
namespace {

using nlohmann::json;

struct PresetGeometry {
  const char* name;
  const char* description;
  std::vector<Vec3> obstacles;
  bool compare = false;
};

const std::vector<PresetGeometry>& geometries() {
  static const std::vector<PresetGeometry> all = {
      {"paper-single-1", "one forbidden direction, first single-obstacle case", {{0.5145, 0.8575, 0.0}}},
      {"paper-single-2", "one forbidden direction, second single-obstacle case", {{-0.099, 0.990, -0.099}}},
      {"paper-single-3", "one forbidden direction, third single-obstacle case", {{0.0, 0.980, 0.196}}},
      {"paper-two-1", "two forbidden directions, case 1", {{0.571, 0.816, 0.081}, {-0.336, 0.842, 0.421}}},
      {"paper-two-2", "two forbidden directions, case 2", {{0.512, 0.854, 0.085}, {-0.188, 0.940, -0.282}}},
      {"paper-two-3", "two forbidden directions, case 3", {{0.514, 0.857, 0.0}, {-0.311, 0.778, -0.544}}},
      {"paper-two-4", "two forbidden directions, case 4", {{0.472, 0.788, 0.394}, {-0.369, 0.924, -0.092}}},
      {"paper-three-1",
       "three forbidden directions",
       {{0.472, 0.788, 0.394}, {-0.336, 0.842, 0.421}, {0.169, 0.845, -0.507}}},
      {"paper-compare-1",
       "proposed controller against the APF-only benchmark on the first single-obstacle case",
       {{0.5145, 0.8575, 0.0}},
       true},
  };
  return all;
}

const PresetGeometry* find(std::string_view name) {
  const auto& all = geometries();
  auto it = std::find_if(all.begin(), all.end(), [&](const auto& g) { return name == g.name; });
  return it == all.end() ? nullptr : &*it;
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& g : geometries()) out.push_back({g.name, g.description});
  return out;
}

bool is_preset(std::string_view name) { return find(name) != nullptr; }

const json& reference_tuning() {
  static const json tuning = json::parse(detail::kReferenceTuning);
  return tuning;
}

json preset_json(std::string_view name, const json& tuning) {
  const PresetGeometry* geo = find(name);
  if (!geo) throw InvalidInput("unknown preset '" + std::string(name) + "'");

  json j;
  j["name"] = geo->name;
  j["description"] = geo->description;
  j["spacecraft"] = {{"inertia", json::array({5.08, 5.14, 5.0})},
                     {"torque_limit", 0.5},
                     {"disturbance_bound", 0.09}};
  j["initial_state"] = {{"attitude", json::array({0.0, 0.0, 0.0, 1.0})},
                        {"omega", json::array({0.0, 0.0, 0.0})}};
  j["boresight"] = json::array({0.0, 0.0, 1.0});
  j["goal"] = json::array({-0.866, 0.5, 0.0});
  j["envelope"] = {{"rho_0", 3.0}, {"rho_inf", 1e-3}, {"k_rho", 0.1}};
  j["compare_with_benchmark"] = geo->compare;

  json defaults = tuning.value("defaults", json::object());
  const json obstacle_defaults = defaults.value("obstacle", json::object());
  defaults.erase("obstacle");
  j.merge_patch(defaults);

  j["obstacles"] = json::array();
  for (const auto& f : geo->obstacles) {
    json o = obstacle_defaults;
    o["direction"] = vec_json(f);
    j["obstacles"].push_back(o);
  }

  const json presets = tuning.value("presets", json::object());
  if (presets.contains(geo->name)) {
    json over = presets.at(geo->name);
    if (over.contains("obstacles")) {
      // Per-obstacle overrides keyed by index.
      for (const auto& [key, patch] : over.at("obstacles").items()) {
        const std::size_t i = std::stoul(key);
        if (i >= j["obstacles"].size()) throw InvalidInput("tuning override for missing obstacle " + key);
        j["obstacles"][i].merge_patch(patch);
      }
      over.erase("obstacles");
    }
    if (over.contains("theta_df_deg")) j.erase("theta_df");
    if (over.contains("theta_df")) j.erase("theta_df_deg");
    j.merge_patch(over);
  }
  return j;
}

LoadedScenario load_preset(std::string_view name, const json& tuning) {
  return scenario_from_json(preset_json(name, tuning));
}

}  // namespace conepoint
