// Coupled integration of attitude, body rate, envelope and tracking
// differentiator under the switching controller, plus the run summary,
// Lyapunov diagnostics and the CSV trajectory log.
#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "conepoint/controller.hpp"

namespace conepoint {

enum class Integrator { rk4, euler };
enum class ControllerMode { proposed, benchmark_apf };

const char* to_string(Integrator i);
const char* to_string(ControllerMode m);

struct SimConfig {
  double dt = 0.01;
  double duration = 120.0;
  Integrator integrator = Integrator::rk4;
  int record_stride = 1;
  bool disturbance_enabled = true;
  ControllerMode controller_mode = ControllerMode::proposed;

  // Throws InvalidParameter unless dt > 0, duration >= dt, record_stride >= 1.
  void validate() const;
  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

// Scenario-wide switching parameters; per-obstacle knots are derived from
// each cone with SwitchConfig::for_cone.
struct SwitchingParams {
  double delta = 0.01;
  double m = 5.0;
  double n = 2.0;
  double p1_fraction = 0.5;

  friend bool operator==(const SwitchingParams&, const SwitchingParams&) = default;
};

// Pointing error must stay below settle_deg from settle_by_s on, and below
// terminal_deg for every t > terminal_after_s.
struct PerformanceTargets {
  bool enabled = true;
  double settle_deg = 1.0;
  double settle_by_s = 50.0;
  double terminal_deg = 0.1;
  double terminal_after_s = 80.0;

  friend bool operator==(const PerformanceTargets&, const PerformanceTargets&) = default;
};

struct Scenario {
  std::string name;
  std::string description;
  SpacecraftParams spacecraft{Mat3::Identity(), 0.5, 0.0};
  BodyState initial;
  Vec3 boresight = Vec3::UnitZ();
  Vec3 goal_inertial = Vec3::UnitX();
  std::vector<ObstacleCone> obstacles;
  EnvelopeConfig envelope;
  ControllerConfig controller;
  SwitchingParams switching;
  double theta_df = 50.0 * 3.14159265358979323846 / 180.0;
  PerformanceTargets targets;
  SimConfig sim;
  // Run the APF-only benchmark alongside and report both.
  bool compare_with_benchmark = false;

  std::vector<SwitchConfig> switch_configs() const;
  ValidationReport validate() const;
};

// [q.x q.y q.z q.w | ω (3) | ρ | TD x1 (3) | TD x2 (3)]
inline constexpr int kStateSize = 14;
using FullState = Eigen::Matrix<double, kStateSize, 1>;

// Torque disturbance used in all preset scenarios, N m.
Vec3 disturbance(double t);

// Controller and plant quantities at one state.
struct Evaluation {
  PointingGeometry geometry;
  BodyState body;
  double x_e = 0.0;
  double x_e_dot = 0.0;
  double rho = 0.0;
  double eps = 0.0;
  Switches switches;
  Vec3 v = Vec3::Zero();
  Vec3 e2 = Vec3::Zero();
  Vec3 torque = Vec3::Zero();  // saturated
  bool saturated = false;
  Vec3 disturbance = Vec3::Zero();
  TdState td;
  double potential = 0.0;
  double V_q = 0.0;
  double V_omega = 0.0;
};

class Simulator {
 public:
  Simulator(Scenario scenario, SimConfig sim);

  const Scenario& scenario() const { return scenario_; }
  const SimConfig& sim() const { return sim_; }

  // Scenario initial state with ρ = ρ_0 and the TD seeded at x1 = v(0), x2 = 0.
  FullState initial_state() const;
  // Both throw SimulationAbort naming the first non-finite field (or a
  // non-positive rho).
  Evaluation evaluate(const FullState& x, double t) const;
  FullState coupled_rhs(const FullState& x, double t) const;
  // One integrator step followed by quaternion renormalization; the norm
  // before renormalization is written to raw_norm when given.
  FullState step(const FullState& x, double t, double* raw_norm = nullptr) const;

 private:
  Scenario scenario_;
  SimConfig sim_;
  std::vector<SwitchConfig> switches_;
};

struct TrajectoryRecord {
  double t = 0.0;
  double x_e = 0.0;
  double pointing_angle_deg = 0.0;
  std::vector<double> beta;
  double rho_q = 0.0;
  double eps_q = 0.0;
  double omega_s_eff = 0.0;
  double omega_v_eff = 0.0;
  Vec3 omega_body = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
  double V_q = 0.0;
  double V_omega = 0.0;
  double td_error = 0.0;
};

struct Summary {
  std::string scenario;
  ControllerMode controller_mode = ControllerMode::proposed;
  double dt = 0.0;
  double duration = 0.0;
  std::vector<double> min_clearance_deg;  // min over time of ang(B, f_i)
  bool constraint_violated = false;
  double settling_time_s = -1.0;           // error stays < settle_deg afterwards; -1 if never
  double terminal_error_deg = 0.0;         // max error for t > terminal_after_s
  double final_error_deg = 0.0;
  double final_x_e = 0.0;
  double max_abs_eps_ppc = 0.0;            // over steps with Ω_s_eff == 0
  double max_abs_eps_low_switch = 0.0;     // over steps with Ω_s_eff < 0.5
  double mode2_time_s = 0.0;               // time with Ω_s_eff == 1
  double mode2_max_eps_rate = 0.0;         // max |Δε|/dt inside those segments
  double saturation_fraction = 0.0;        // steps with any clamped component
  double max_abs_torque = 0.0;
  double max_quaternion_drift = 0.0;       // |‖q‖ − 1| after renormalization
  double max_step_norm_error = 0.0;        // same, before renormalization
  bool targets_met = true;
  std::vector<std::string> target_misses;
};

struct RunResult {
  std::vector<TrajectoryRecord> records;
  Summary summary;
  double wall_time_s = 0.0;
};

RunResult run_scenario(const Scenario& scenario, const SimConfig& sim);
inline RunResult run_scenario(const Scenario& scenario) { return run_scenario(scenario, scenario.sim); }

struct LyapunovOptions {
  double terminal_ball_deg = 1.0;  // steps inside this pointing error are ignored
  double transient_s = 1.0;        // initial TD transient skipped
  double tolerance = 1e-6;         // V̇ above this counts as an increase
};

struct LyapunovDiagnostics {
  std::vector<double> t;
  std::vector<double> V;
  std::vector<double> V_dot;  // forward difference, one shorter than V
  std::size_t steps_considered = 0;
  std::size_t steps_increasing = 0;
  double increasing_fraction = 0.0;
  double max_V_dot = 0.0;
};

LyapunovDiagnostics lyapunov_monitor(std::span<const TrajectoryRecord> records,
                                     const LyapunovOptions& options = {});

// Header fixed to the TrajectoryRecord field order; %.17g floats.
void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryRecord> records);

}  // namespace conepoint
