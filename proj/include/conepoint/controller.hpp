// Switching backstepping controller: virtual angular-velocity law, tracking
// differentiator, torque law with tanh disturbance compensation, the
// APF-only benchmark and configuration checks.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "conepoint/attitude.hpp"
#include "conepoint/envelope.hpp"
#include "conepoint/potential.hpp"

namespace conepoint {

struct ControllerConfig {
  double K1 = 0.3;     // PPC virtual gain
  double K_p = 0.005;  // APF virtual gain
  Vec3 K_omega = Vec3::Constant(4.0);  // rate-loop gain (diagonal)
  double g = 0.05;     // BLF gain
  double F = 1.0;      // BLF width
  double k_a = 0.05;   // attraction gain
  double eta = 2e-4;   // tanh compensation width
  double sigma = 1e-6; // denominator regularizer
  double td_R = 20.0;
  double td_a1 = 1.0;
  double td_a2 = 2.0;

  friend bool operator==(const ControllerConfig&, const ControllerConfig&) = default;
};

// Tracking-differentiator state: x1 follows the input, x2 its derivative.
struct TdState {
  Vec3 x1 = Vec3::Zero();
  Vec3 x2 = Vec3::Zero();
};

// One obstacle as seen from the body: its body-frame direction, β = B·f_b
// and the repulsion slope k_r∇β at that β.
struct ObstacleSample {
  Vec3 f_body = Vec3::UnitX();
  double beta = -1.0;
  double grad = 0.0;
};

struct PointingGeometry {
  Vec3 boresight = Vec3::UnitZ();
  Vec3 goal = Vec3::UnitZ();  // r_b
  std::vector<ObstacleSample> obstacles;

  double pointing_error() const { return conepoint::pointing_error(boresight, goal); }
  std::vector<double> betas() const;
};

PointingGeometry observe(const UnitQuaternion& attitude, const Vec3& boresight,
                         const Vec3& goal_inertial, std::span<const ObstacleCone> cones);

// Lower bound on sin θ_d while Ω_v is ramping: the smaller of
// sin(Θ_df − acos P0) and sin(π − acos P1). Throws InvalidParameter when the
// lower angle bound is not positive or exceeds the upper one.
double min_sin_theta_d(double theta_df, double P0, double P1);

// P1 = k_a r×B − Σ k_r∇β f_b×B.
Vec3 apf_direction(const PointingGeometry& geo, double k_a);

// v = r×B/(|r×B|²+σ)(−K1 ρ ε)(1 − Ω_v) − P1/(|P1|²+σ) Ω_v K_p.
Vec3 virtual_law(const PointingGeometry& geo, double eps_q, double rho_q, double omega_v,
                 const ControllerConfig& cfg);

// ẋ1 = x2, ẋ2 = −R² a1 tanh(x1 − u) − R² a2 tanh(x2 / R).
TdState td_rhs(const TdState& state, const Vec3& input, const ControllerConfig& cfg);
// RK4 step with the input held over the step.
TdState td_step(const TdState& state, const Vec3& input, double dt, const ControllerConfig& cfg);

// Above this x_e the boresight is treated as sitting on the antipodal
// equilibrium and a kick torque is added.
inline constexpr double kAntipodalThreshold = 2.0 - 1e-6;
// Kick magnitude as a fraction of the torque limit.
inline constexpr double kAntipodalKick = 0.1;

struct TorqueInputs {
  double eps_q = 0.0;
  double rho_q = 1.0;
  double omega_s = 0.0;
  double omega_v = 0.0;
  Vec3 e2 = Vec3::Zero();      // ω − v
  Vec3 sd_dot = Vec3::Zero();  // TD derivative output
};

// Full torque law before saturation.
Vec3 torque_law_unsaturated(const BodyState& state, const PointingGeometry& geo,
                            const TorqueInputs& in, const SpacecraftParams& params,
                            const ControllerConfig& cfg);
// Same, each component clamped to ±torque_limit.
Vec3 torque_law(const BodyState& state, const PointingGeometry& geo, const TorqueInputs& in,
                const SpacecraftParams& params, const ControllerConfig& cfg);

Vec3 saturate(const Vec3& torque, double limit);

// APF-only comparison controller: the same structure with Ω_s = Ω_v = 1,
// so the virtual law is the potential-field branch alone and the barrier
// term drops out of the torque.
Vec3 benchmark_virtual_law(const PointingGeometry& geo, const ControllerConfig& cfg);
Vec3 benchmark_apf_law(const BodyState& state, const PointingGeometry& geo, const Vec3& e2,
                       const Vec3& sd_dot, const SpacecraftParams& params,
                       const ControllerConfig& cfg);

enum class RuleStatus { pass, warn, fail };

struct RuleResult {
  std::string rule;
  RuleStatus status = RuleStatus::pass;
  std::string message;
  double value = 0.0;  // measured quantity the rule compared
};

struct ValidationReport {
  std::vector<RuleResult> rules;

  std::vector<RuleResult> failures() const;
  std::vector<RuleResult> warnings() const;
  bool ok() const { return failures().empty(); }
};

// Everything the parameter rules look at.
struct ValidationInputs {
  const ControllerConfig& controller;
  const EnvelopeConfig& envelope;
  std::span<const ObstacleCone> obstacles;
  std::span<const SwitchConfig> switches;
  Vec3 goal_inertial = Vec3::UnitX();
  double initial_pointing_error = 0.0;
  double theta_df = 0.0;
};

ValidationReport validate_config(const ValidationInputs& in);

const char* to_string(RuleStatus s);

}  // namespace conepoint
