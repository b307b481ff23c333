#include "conepoint/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "conepoint/errors.hpp"
#include "conepoint/presets.hpp"

namespace conepoint {
namespace {

using nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::string fmt_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Walks a scenario document collecting every problem instead of stopping at
// the first one.
class Reader {
 public:
  std::vector<std::string> issues;
  std::vector<std::string> warnings;

  void issue(const std::string& path, const std::string& rule) { issues.push_back(path + ": " + rule); }

  const json* object(const json& parent, const char* key, const std::string& path, bool required) {
    if (!parent.contains(key)) {
      if (required) issue(path, "required field missing");
      return nullptr;
    }
    const json& j = parent.at(key);
    if (!j.is_object()) {
      issue(path, "must be an object");
      return nullptr;
    }
    return &j;
  }

  std::optional<double> number(const json& parent, const char* key, const std::string& path,
                               std::optional<double> fallback = std::nullopt) {
    if (!parent.contains(key)) {
      if (!fallback) issue(path, "required field missing");
      return fallback;
    }
    const json& j = parent.at(key);
    if (!j.is_number()) {
      issue(path, "must be a number");
      return std::nullopt;
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      issue(path, "must be finite");
      return std::nullopt;
    }
    return v;
  }

  // `<key>` in radians or `<key>_deg` in degrees.
  std::optional<double> angle(const json& parent, const std::string& key, const std::string& path,
                              std::optional<double> fallback = std::nullopt) {
    const std::string deg_key = key + "_deg";
    const bool has_rad = parent.contains(key);
    const bool has_deg = parent.contains(deg_key);
    if (has_rad && has_deg) {
      issue(path, "give either '" + key + "' or '" + deg_key + "', not both");
      return std::nullopt;
    }
    if (has_deg) {
      auto d = number(parent, deg_key.c_str(), path + "_deg");
      if (d) return *d * kDegToRad;
      return std::nullopt;
    }
    return number(parent, key.c_str(), path, fallback);
  }

  template <int N>
  std::optional<Eigen::Matrix<double, N, 1>> vector(const json& parent, const char* key,
                                                    const std::string& path, bool required) {
    if (!parent.contains(key)) {
      if (required) issue(path, "required field missing");
      return std::nullopt;
    }
    const json& j = parent.at(key);
    if (!j.is_array() || j.size() != N) {
      issue(path, "must be an array of " + std::to_string(N) + " numbers");
      return std::nullopt;
    }
    Eigen::Matrix<double, N, 1> v;
    for (int i = 0; i < N; ++i) {
      if (!j[i].is_number() || !std::isfinite(j[i].get<double>())) {
        issue(path + "[" + std::to_string(i) + "]", "must be a finite number");
        return std::nullopt;
      }
      v(i) = j[i].get<double>();
    }
    return v;
  }

  template <int N>
  std::optional<Eigen::Matrix<double, N, 1>> unit(const json& parent, const char* key,
                                                  const std::string& path, bool required) {
    auto v = vector<N>(parent, key, path, required);
    if (!v) return std::nullopt;
    const double n = v->norm();
    if (!(n > 1e-12)) {
      issue(path, "must be non-zero");
      return std::nullopt;
    }
    if (std::abs(n - 1.0) > 1e-12) {
      *v /= n;
      if (std::abs(n - 1.0) > kNormalizeWarnThreshold) {
        warnings.push_back(path + ": normalized to unit length (norm was " + fmt_number(n) + ")");
      }
    }
    return v;
  }

  std::optional<Mat3> inertia(const json& parent, const std::string& path) {
    if (!parent.contains("inertia")) {
      issue(path, "required field missing");
      return std::nullopt;
    }
    const json& j = parent.at("inertia");
    if (j.is_array() && j.size() == 3 && j[0].is_number()) {
      auto d = vector<3>(parent, "inertia", path, true);
      if (!d) return std::nullopt;
      return Mat3(d->asDiagonal());
    }
    if (!j.is_array() || j.size() != 3) {
      issue(path, "must be a 3x3 array or a 3-element diagonal");
      return std::nullopt;
    }
    Mat3 m;
    for (int r = 0; r < 3; ++r) {
      auto row = row3(j, r, path + "[" + std::to_string(r) + "]");
      if (!row) return std::nullopt;
      m.row(r) = row->transpose();
    }
    return m;
  }

  std::optional<std::string> string(const json& parent, const char* key, const std::string& path,
                                    std::optional<std::string> fallback) {
    if (!parent.contains(key)) return fallback;
    const json& j = parent.at(key);
    if (!j.is_string()) {
      issue(path, "must be a string");
      return std::nullopt;
    }
    return j.get<std::string>();
  }

  std::optional<bool> boolean(const json& parent, const char* key, const std::string& path,
                              bool fallback) {
    if (!parent.contains(key)) return fallback;
    const json& j = parent.at(key);
    if (!j.is_boolean()) {
      issue(path, "must be true or false");
      return std::nullopt;
    }
    return j.get<bool>();
  }

 private:
  std::optional<Eigen::Vector3d> row3(const json& arr, int index, const std::string& path) {
    const json& j = arr[index];
    if (!j.is_array() || j.size() != 3) {
      issue(path, "must be an array of 3 numbers");
      return std::nullopt;
    }
    Eigen::Vector3d v;
    for (int i = 0; i < 3; ++i) {
      if (!j[i].is_number()) {
        issue(path + "[" + std::to_string(i) + "]", "must be a number");
        return std::nullopt;
      }
      v(i) = j[i].get<double>();
    }
    return v;
  }
};

template <class T>
void assign(T& dst, const std::optional<T>& src) {
  if (src) dst = *src;
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

LoadedScenario scenario_from_json(const json& j) {
  Reader rd;
  LoadedScenario out;
  Scenario& sc = out.scenario;
  if (!j.is_object()) throw ValidationError({"<root>: must be a JSON object"});

  assign(sc.name, rd.string(j, "name", "name", std::string("unnamed")));
  assign(sc.description, rd.string(j, "description", "description", std::string()));

  if (const json* sp = rd.object(j, "spacecraft", "spacecraft", true)) {
    auto inertia = rd.inertia(*sp, "spacecraft.inertia");
    auto limit = rd.number(*sp, "torque_limit", "spacecraft.torque_limit");
    auto bound = rd.number(*sp, "disturbance_bound", "spacecraft.disturbance_bound");
    if (inertia && limit && bound) {
      try {
        sc.spacecraft = SpacecraftParams(*inertia, *limit, *bound);
      } catch (const InvalidParameter& e) {
        rd.issue("spacecraft", e.what());
      }
    }
  }

  if (const json* init = rd.object(j, "initial_state", "initial_state", false)) {
    if (auto q = rd.unit<4>(*init, "attitude", "initial_state.attitude", false)) {
      sc.initial.attitude = UnitQuaternion((*q)(0), (*q)(1), (*q)(2), (*q)(3));
    }
    assign(sc.initial.omega, rd.vector<3>(*init, "omega", "initial_state.omega", false));
  }
  assign(sc.boresight, rd.unit<3>(j, "boresight", "boresight", false));
  assign(sc.goal_inertial, rd.unit<3>(j, "goal", "goal", true));

  if (!j.contains("obstacles")) {
    rd.issue("obstacles", "required field missing (use [] for none)");
  } else if (!j.at("obstacles").is_array()) {
    rd.issue("obstacles", "must be an array");
  } else {
    const json& arr = j.at("obstacles");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "obstacles[" + std::to_string(i) + "]";
      if (!arr[i].is_object()) {
        rd.issue(path, "must be an object");
        continue;
      }
      const json& o = arr[i];
      auto dir = rd.unit<3>(o, "direction", path + ".direction", true);
      auto tf = rd.angle(o, "theta_f", path + ".theta_f");
      auto t0 = rd.angle(o, "theta_0", path + ".theta_0");
      auto t1 = rd.angle(o, "theta_1", path + ".theta_1");
      auto kr = rd.number(o, "k_r", path + ".k_r");
      auto rs = rd.number(o, "r_slope", path + ".r_slope");
      if (dir && tf && t0 && t1 && kr && rs) {
        try {
          sc.obstacles.emplace_back(*dir, *tf, *t0, *t1, *kr, *rs);
        } catch (const InvalidParameter& e) {
          rd.issue(path, e.what());
        }
      }
    }
  }

  if (const json* env = rd.object(j, "envelope", "envelope", true)) {
    assign(sc.envelope.rho_0, rd.number(*env, "rho_0", "envelope.rho_0"));
    assign(sc.envelope.rho_inf, rd.number(*env, "rho_inf", "envelope.rho_inf"));
    assign(sc.envelope.k_rho, rd.number(*env, "k_rho", "envelope.k_rho"));
    assign(sc.envelope.e_min, rd.number(*env, "e_min", "envelope.e_min", sc.envelope.e_min));
    try {
      sc.envelope.validate();
    } catch (const InvalidParameter& e) {
      rd.issue("envelope", e.what());
    }
  }

  if (const json* c = rd.object(j, "controller", "controller", true)) {
    auto& cc = sc.controller;
    assign(cc.K1, rd.number(*c, "K1", "controller.K1"));
    assign(cc.K_p, rd.number(*c, "K_p", "controller.K_p"));
    if (!c->contains("K_omega")) {
      rd.issue("controller.K_omega", "required field missing");
    } else if (c->at("K_omega").is_number()) {
      assign(cc.K_omega, std::optional<Vec3>(Vec3::Constant(c->at("K_omega").get<double>())));
    } else {
      assign(cc.K_omega, rd.vector<3>(*c, "K_omega", "controller.K_omega", true));
    }
    assign(cc.g, rd.number(*c, "g", "controller.g"));
    assign(cc.F, rd.number(*c, "F", "controller.F"));
    assign(cc.k_a, rd.number(*c, "k_a", "controller.k_a"));
    assign(cc.eta, rd.number(*c, "eta", "controller.eta"));
    assign(cc.sigma, rd.number(*c, "sigma", "controller.sigma", cc.sigma));
    assign(cc.td_R, rd.number(*c, "td_R", "controller.td_R"));
    assign(cc.td_a1, rd.number(*c, "td_a1", "controller.td_a1", cc.td_a1));
    assign(cc.td_a2, rd.number(*c, "td_a2", "controller.td_a2"));
  }

  if (const json* sw = rd.object(j, "switching", "switching", false)) {
    auto& s = sc.switching;
    assign(s.delta, rd.number(*sw, "delta", "switching.delta", s.delta));
    assign(s.m, rd.number(*sw, "m", "switching.m", s.m));
    assign(s.n, rd.number(*sw, "n", "switching.n", s.n));
    assign(s.p1_fraction, rd.number(*sw, "p1_fraction", "switching.p1_fraction", s.p1_fraction));
  }

  assign(sc.theta_df, rd.angle(j, "theta_df", "theta_df", sc.theta_df));

  if (const json* t = rd.object(j, "targets", "targets", false)) {
    auto& tg = sc.targets;
    assign(tg.enabled, rd.boolean(*t, "enabled", "targets.enabled", tg.enabled));
    assign(tg.settle_deg, rd.number(*t, "settle_deg", "targets.settle_deg", tg.settle_deg));
    assign(tg.settle_by_s, rd.number(*t, "settle_by_s", "targets.settle_by_s", tg.settle_by_s));
    assign(tg.terminal_deg, rd.number(*t, "terminal_deg", "targets.terminal_deg", tg.terminal_deg));
    assign(tg.terminal_after_s,
           rd.number(*t, "terminal_after_s", "targets.terminal_after_s", tg.terminal_after_s));
  }

  if (const json* s = rd.object(j, "sim", "sim", false)) {
    auto& sim = sc.sim;
    assign(sim.dt, rd.number(*s, "dt", "sim.dt", sim.dt));
    assign(sim.duration, rd.number(*s, "duration", "sim.duration", sim.duration));
    if (auto integ = rd.string(*s, "integrator", "sim.integrator", std::string("rk4"))) {
      if (*integ == "rk4") {
        sim.integrator = Integrator::rk4;
      } else if (*integ == "euler") {
        sim.integrator = Integrator::euler;
      } else {
        rd.issue("sim.integrator", "must be \"rk4\" or \"euler\"");
      }
    }
    if (auto stride = rd.number(*s, "record_stride", "sim.record_stride", sim.record_stride)) {
      if (*stride != std::floor(*stride)) {
        rd.issue("sim.record_stride", "must be an integer");
      } else {
        sim.record_stride = static_cast<int>(*stride);
      }
    }
    assign(sim.disturbance_enabled, rd.boolean(*s, "disturbance_enabled", "sim.disturbance_enabled",
                                               sim.disturbance_enabled));
    if (auto mode = rd.string(*s, "controller_mode", "sim.controller_mode", std::string("proposed"))) {
      if (*mode == "proposed") {
        sim.controller_mode = ControllerMode::proposed;
      } else if (*mode == "benchmark_apf") {
        sim.controller_mode = ControllerMode::benchmark_apf;
      } else {
        rd.issue("sim.controller_mode", "must be \"proposed\" or \"benchmark_apf\"");
      }
    }
    try {
      sim.validate();
    } catch (const InvalidParameter& e) {
      rd.issue("sim", e.what());
    }
  }
  assign(sc.compare_with_benchmark,
         rd.boolean(j, "compare_with_benchmark", "compare_with_benchmark", false));

  if (rd.issues.empty()) {
    try {
      const ValidationReport report = sc.validate();
      for (const auto& r : report.rules) {
        const std::string line = r.rule + ": " + r.message + " (measured " + fmt_number(r.value) + ")";
        if (r.status == RuleStatus::fail) rd.issues.push_back(line);
        if (r.status == RuleStatus::warn) rd.warnings.push_back(line);
      }
    } catch (const InvalidParameter& e) {
      rd.issue("switching", e.what());
    }
  }

  if (!rd.issues.empty()) throw ValidationError(rd.issues);
  out.warnings = std::move(rd.warnings);
  return out;
}

LoadedScenario scenario_from_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

LoadedScenario load_scenario(const std::string& source) {
  if (is_preset(source)) return load_preset(source);
  std::ifstream in(source);
  if (!in) throw ParseError("cannot read scenario file '" + source + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return scenario_from_text(buf.str());
}

json scenario_to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["description"] = sc.description;
  const Mat3& I = sc.spacecraft.inertia();
  j["spacecraft"] = {
      {"inertia", json::array({vec_json(I.row(0)), vec_json(I.row(1)), vec_json(I.row(2))})},
      {"torque_limit", sc.spacecraft.torque_limit()},
      {"disturbance_bound", sc.spacecraft.disturbance_bound()},
  };
  const auto& q = sc.initial.attitude;
  j["initial_state"] = {{"attitude", json::array({q.x(), q.y(), q.z(), q.w()})},
                        {"omega", vec_json(sc.initial.omega)}};
  j["boresight"] = vec_json(sc.boresight);
  j["goal"] = vec_json(sc.goal_inertial);
  j["obstacles"] = json::array();
  for (const auto& c : sc.obstacles) {
    j["obstacles"].push_back({{"direction", vec_json(c.direction())},
                              {"theta_f", c.theta_f()},
                              {"theta_0", c.theta_0()},
                              {"theta_1", c.theta_1()},
                              {"k_r", c.k_r()},
                              {"r_slope", c.r_slope()}});
  }
  j["envelope"] = {{"rho_0", sc.envelope.rho_0},
                   {"rho_inf", sc.envelope.rho_inf},
                   {"k_rho", sc.envelope.k_rho},
                   {"e_min", sc.envelope.e_min}};
  const auto& c = sc.controller;
  j["controller"] = {{"K1", c.K1},       {"K_p", c.K_p},     {"K_omega", vec_json(c.K_omega)},
                     {"g", c.g},         {"F", c.F},         {"k_a", c.k_a},
                     {"eta", c.eta},     {"sigma", c.sigma}, {"td_R", c.td_R},
                     {"td_a1", c.td_a1}, {"td_a2", c.td_a2}};
  j["switching"] = {{"delta", sc.switching.delta},
                    {"m", sc.switching.m},
                    {"n", sc.switching.n},
                    {"p1_fraction", sc.switching.p1_fraction}};
  j["theta_df"] = sc.theta_df;
  j["targets"] = {{"enabled", sc.targets.enabled},
                  {"settle_deg", sc.targets.settle_deg},
                  {"settle_by_s", sc.targets.settle_by_s},
                  {"terminal_deg", sc.targets.terminal_deg},
                  {"terminal_after_s", sc.targets.terminal_after_s}};
  j["sim"] = {{"dt", sc.sim.dt},
              {"duration", sc.sim.duration},
              {"integrator", to_string(sc.sim.integrator)},
              {"record_stride", sc.sim.record_stride},
              {"disturbance_enabled", sc.sim.disturbance_enabled},
              {"controller_mode", to_string(sc.sim.controller_mode)}};
  j["compare_with_benchmark"] = sc.compare_with_benchmark;
  return j;
}

json summary_to_json(const Summary& s) {
  json j;
  j["scenario"] = s.scenario;
  j["controller_mode"] = to_string(s.controller_mode);
  j["dt"] = s.dt;
  j["duration"] = s.duration;
  j["min_clearance_deg"] = s.min_clearance_deg;
  j["constraint_violated"] = s.constraint_violated;
  j["settling_time_s"] = s.settling_time_s < 0.0 ? json(nullptr) : json(s.settling_time_s);
  j["terminal_error_deg"] = s.terminal_error_deg;
  j["final_error_deg"] = s.final_error_deg;
  j["final_x_e"] = s.final_x_e;
  j["max_abs_eps_ppc"] = s.max_abs_eps_ppc;
  j["max_abs_eps_low_switch"] = s.max_abs_eps_low_switch;
  j["mode2_time_s"] = s.mode2_time_s;
  j["mode2_max_eps_rate"] = s.mode2_max_eps_rate;
  j["saturation_fraction"] = s.saturation_fraction;
  j["max_abs_torque"] = s.max_abs_torque;
  j["max_quaternion_drift"] = s.max_quaternion_drift;
  j["max_step_norm_error"] = s.max_step_norm_error;
  j["targets_met"] = s.targets_met;
  j["target_misses"] = s.target_misses;
  return j;
}

json report_to_json(const ValidationReport& report) {
  json arr = json::array();
  for (const auto& r : report.rules) {
    arr.push_back({{"rule", r.rule},
                   {"status", to_string(r.status)},
                   {"message", r.message},
                   {"value", r.value}});
  }
  return arr;
}

}  // namespace conepoint
