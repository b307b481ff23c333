#include "conepoint/controller.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conepoint/errors.hpp"

namespace conepoint {

std::vector<double> PointingGeometry::betas() const {
  std::vector<double> out;
  out.reserve(obstacles.size());
  for (const auto& o : obstacles) out.push_back(o.beta);
  return out;
}

PointingGeometry observe(const UnitQuaternion& attitude, const Vec3& boresight,
                         const Vec3& goal_inertial, std::span<const ObstacleCone> cones) {
  const Mat3 A = attitude.attitude_matrix();
  PointingGeometry geo;
  geo.boresight = boresight;
  geo.goal = A * goal_inertial;
  geo.obstacles.reserve(cones.size());
  for (const auto& cone : cones) {
    ObstacleSample s;
    s.f_body = A * cone.direction();
    s.beta = std::clamp(boresight.dot(s.f_body), -1.0, 1.0);
    s.grad = repulsion_grad_beta(cone, s.beta);
    geo.obstacles.push_back(s);
  }
  return geo;
}

double min_sin_theta_d(double theta_df, double P0, double P1) {
  if (!(theta_df > 0.0 && theta_df < std::numbers::pi)) {
    throw InvalidParameter("theta_df must lie in (0, pi)");
  }
  if (!(P0 < P1)) throw InvalidParameter("min_sin_theta_d needs P0 < P1");
  const double lower = theta_df - std::acos(std::clamp(P0, -1.0, 1.0));
  const double upper = std::numbers::pi - std::acos(std::clamp(P1, -1.0, 1.0));
  if (!(lower > 0.0)) {
    throw InvalidParameter("theta_df does not clear the switching band: min theta_d <= 0");
  }
  if (lower > upper) throw InvalidParameter("min theta_d exceeds max theta_d");
  return std::min(std::sin(lower), std::sin(upper));
}

Vec3 apf_direction(const PointingGeometry& geo, double k_a) {
  Vec3 p = k_a * geo.goal.cross(geo.boresight);
  for (const auto& o : geo.obstacles) p -= o.grad * o.f_body.cross(geo.boresight);
  return p;
}

Vec3 virtual_law(const PointingGeometry& geo, double eps_q, double rho_q, double omega_v,
                 const ControllerConfig& cfg) {
  Vec3 v = Vec3::Zero();
  if (omega_v < 1.0) {
    const Vec3 rxb = geo.goal.cross(geo.boresight);
    v += rxb / (rxb.squaredNorm() + cfg.sigma) * (-cfg.K1 * rho_q * eps_q) * (1.0 - omega_v);
  }
  if (omega_v > 0.0) {
    const Vec3 p1 = apf_direction(geo, cfg.k_a);
    v -= p1 / (p1.squaredNorm() + cfg.sigma) * omega_v * cfg.K_p;
  }
  return v;
}

TdState td_rhs(const TdState& s, const Vec3& input, const ControllerConfig& cfg) {
  const double R = cfg.td_R;
  TdState d;
  d.x1 = s.x2;
  d.x2 = -R * R * cfg.td_a1 * (s.x1 - input).array().tanh().matrix() -
         R * R * cfg.td_a2 * (s.x2 / R).array().tanh().matrix();
  return d;
}

TdState td_step(const TdState& s, const Vec3& input, double dt, const ControllerConfig& cfg) {
  auto add = [](const TdState& a, const TdState& b, double h) {
    return TdState{a.x1 + h * b.x1, a.x2 + h * b.x2};
  };
  const TdState k1 = td_rhs(s, input, cfg);
  const TdState k2 = td_rhs(add(s, k1, 0.5 * dt), input, cfg);
  const TdState k3 = td_rhs(add(s, k2, 0.5 * dt), input, cfg);
  const TdState k4 = td_rhs(add(s, k3, dt), input, cfg);
  return {s.x1 + dt / 6.0 * (k1.x1 + 2.0 * k2.x1 + 2.0 * k3.x1 + k4.x1),
          s.x2 + dt / 6.0 * (k1.x2 + 2.0 * k2.x2 + 2.0 * k3.x2 + k4.x2)};
}

Vec3 saturate(const Vec3& torque, double limit) {
  return torque.cwiseMax(-limit).cwiseMin(limit);
}

Vec3 torque_law_unsaturated(const BodyState& state, const PointingGeometry& geo,
                            const TorqueInputs& in, const SpacecraftParams& params,
                            const ControllerConfig& cfg) {
  const Mat3& J = params.inertia();
  const Vec3& w = state.omega;
  const double Dm = params.disturbance_bound();

  Vec3 u = w.cross(J * w);
  u -= cfg.K_omega.cwiseProduct(in.e2);
  u -= Dm * (in.e2 / cfg.eta).array().tanh().matrix();
  u += J * in.sd_dot;
  if (in.omega_s < 1.0) {
    const Vec3 rxb = geo.goal.cross(geo.boresight);
    u -= cfg.g * std::tanh(in.eps_q / cfg.F) / in.rho_q * rxb * (1.0 - in.omega_s);
  }
  if (in.omega_v > 0.0) u -= apf_direction(geo, cfg.k_a) * in.omega_v;

  if (geo.pointing_error() > kAntipodalThreshold) {
    Eigen::Index axis = 0;
    geo.boresight.cwiseAbs().minCoeff(&axis);
    u(axis) += kAntipodalKick * params.torque_limit();
  }
  return u;
}

Vec3 torque_law(const BodyState& state, const PointingGeometry& geo, const TorqueInputs& in,
                const SpacecraftParams& params, const ControllerConfig& cfg) {
  return saturate(torque_law_unsaturated(state, geo, in, params, cfg), params.torque_limit());
}

Vec3 benchmark_virtual_law(const PointingGeometry& geo, const ControllerConfig& cfg) {
  return virtual_law(geo, 0.0, 1.0, 1.0, cfg);
}

Vec3 benchmark_apf_law(const BodyState& state, const PointingGeometry& geo, const Vec3& e2,
                       const Vec3& sd_dot, const SpacecraftParams& params,
                       const ControllerConfig& cfg) {
  TorqueInputs in;
  in.omega_s = 1.0;
  in.omega_v = 1.0;
  in.e2 = e2;
  in.sd_dot = sd_dot;
  return torque_law(state, geo, in, params, cfg);
}

std::vector<RuleResult> ValidationReport::failures() const {
  std::vector<RuleResult> out;
  std::copy_if(rules.begin(), rules.end(), std::back_inserter(out),
               [](const RuleResult& r) { return r.status == RuleStatus::fail; });
  return out;
}

std::vector<RuleResult> ValidationReport::warnings() const {
  std::vector<RuleResult> out;
  std::copy_if(rules.begin(), rules.end(), std::back_inserter(out),
               [](const RuleResult& r) { return r.status == RuleStatus::warn; });
  return out;
}

const char* to_string(RuleStatus s) {
  switch (s) {
    case RuleStatus::pass: return "pass";
    case RuleStatus::warn: return "warn";
    case RuleStatus::fail: return "fail";
  }
  return "?";
}

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
// Relative mismatch of k_a x_E against k_r tolerated without a warning.
constexpr double kEquilibriumTolerance = 1e-6;

RuleResult check(std::string rule, bool ok, RuleStatus on_failure, std::string message,
                 double value) {
  return {std::move(rule), ok ? RuleStatus::pass : on_failure, std::move(message), value};
}

}  // namespace

ValidationReport validate_config(const ValidationInputs& in) {
  ValidationReport report;
  auto& rules = report.rules;
  const auto& c = in.controller;

  const bool gains_ok = c.K1 > 0 && c.K_p > 0 && (c.K_omega.array() > 0).all() && c.g > 0 &&
                        c.F > 0 && c.k_a > 0 && c.eta > 0 && c.sigma > 0 && c.td_R > 0 &&
                        c.td_a1 > 0 && c.td_a2 > 0;
  rules.push_back(check("gains_positive", gains_ok, RuleStatus::fail,
                        "all controller gains must be > 0", 0.0));

  rules.push_back(check("k1_exceeds_k_rho", c.K1 > in.envelope.k_rho, RuleStatus::fail,
                        "K1 must exceed the envelope decay rate k_rho", c.K1 - in.envelope.k_rho));

  rules.push_back(check("initial_inside_envelope",
                        in.envelope.rho_0 > in.initial_pointing_error, RuleStatus::fail,
                        "rho_0 must strictly exceed the initial pointing error x_e(0)",
                        in.envelope.rho_0 - in.initial_pointing_error));

  if (in.obstacles.size() != in.switches.size()) {
    throw InvalidInput("validate_config needs one switch config per obstacle");
  }
  const Vec3 goal = in.goal_inertial.normalized();
  for (std::size_t i = 0; i < in.obstacles.size(); ++i) {
    const auto& cone = in.obstacles[i];
    const auto& sw = in.switches[i];
    const std::string tag = "obstacle[" + std::to_string(i) + "].";
    const double separation = angle_between(goal, cone.direction());

    rules.push_back(check(tag + "goal_separation", separation >= in.theta_df, RuleStatus::fail,
                          "goal must be at least theta_df away from the forbidden direction",
                          separation * kRadToDeg));

    const double beta_goal = goal.dot(cone.direction());
    rules.push_back(check(tag + "goal_outside_switch_band", beta_goal < sw.V0, RuleStatus::fail,
                          "the goal direction must not lie inside the switching band",
                          sw.V0 - beta_goal));

    rules.push_back(check(tag + "slope_bound", cone.slope_gain() >= kMinSlopeGain,
                          RuleStatus::fail,
                          "r (L1 - L0) / k_r must be >= sqrt(3/2) so that k_r grad <= r",
                          cone.slope_gain()));

    try {
      const double ms = min_sin_theta_d(in.theta_df, sw.P0, sw.P1);
      const double needed = cone.r_slope() / ms;
      rules.push_back(check(tag + "attraction_gain_bound", c.k_a >= needed, RuleStatus::warn,
                            "k_a must be >= r / min(sin theta_d)", needed));
    } catch (const InvalidParameter& e) {
      rules.push_back({tag + "attraction_gain_bound", RuleStatus::warn, e.what(), 0.0});
    }

    const double x_E = 1.0 - std::cos(separation - cone.theta_1());
    const double residual = c.k_a * x_E - cone.k_r();
    rules.push_back(check(tag + "boundary_equilibrium",
                          std::abs(residual) <= kEquilibriumTolerance * cone.k_r(),
                          RuleStatus::warn, "k_a x_E differs from k_r", residual));
  }
  return report;
}

}  // namespace conepoint
