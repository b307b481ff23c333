#include "conepoint/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "conepoint/errors.hpp"

namespace conepoint {
namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double angle_deg_from_cos(double c) { return std::acos(std::clamp(c, -1.0, 1.0)) * kRadToDeg; }

// Pointing angle from x_e without the acos precision loss near zero.
double pointing_angle_deg(double x_e) {
  return 2.0 * std::asin(std::sqrt(std::clamp(0.5 * x_e, 0.0, 1.0))) * kRadToDeg;
}

Quaternion quat_of(const FullState& x) { return {x(0), x(1), x(2), x(3)}; }

}  // namespace

const char* to_string(Integrator i) { return i == Integrator::rk4 ? "rk4" : "euler"; }

const char* to_string(ControllerMode m) {
  return m == ControllerMode::proposed ? "proposed" : "benchmark_apf";
}

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidParameter("sim.dt must be > 0");
  if (!(duration >= dt)) throw InvalidParameter("sim.duration must be >= dt");
  if (record_stride < 1) throw InvalidParameter("sim.record_stride must be >= 1");
}

std::vector<SwitchConfig> Scenario::switch_configs() const {
  std::vector<SwitchConfig> out;
  out.reserve(obstacles.size());
  for (const auto& cone : obstacles) {
    out.push_back(SwitchConfig::for_cone(cone, switching.delta, switching.m, switching.n,
                                         switching.p1_fraction));
  }
  return out;
}

ValidationReport Scenario::validate() const {
  const auto sw = switch_configs();
  const Vec3 goal_b = rotate_to_body(initial.attitude, goal_inertial.normalized());
  ValidationInputs in{controller, envelope, obstacles, sw};
  in.goal_inertial = goal_inertial;
  in.initial_pointing_error = pointing_error(boresight, goal_b);
  in.theta_df = theta_df;
  return validate_config(in);
}

Vec3 disturbance(double t) {
  constexpr double wp = 0.01;
  return 1e-3 * Vec3(4.0 * std::sin(3.0 * wp * t) + 3.0 * std::cos(10.0 * wp * t) - 40.0,
                     -1.5 * std::sin(2.0 * wp * t) + 3.0 * std::cos(5.0 * wp * t) + 45.0,
                     3.0 * std::sin(10.0 * wp * t) - 8.0 * std::cos(4.0 * wp * t) + 40.0);
}

Simulator::Simulator(Scenario scenario, SimConfig sim)
    : scenario_(std::move(scenario)), sim_(sim), switches_(scenario_.switch_configs()) {
  sim_.validate();
  scenario_.envelope.validate();
}

FullState Simulator::initial_state() const {
  const auto& q = scenario_.initial.attitude;
  FullState x = FullState::Zero();
  x << q.x(), q.y(), q.z(), q.w(), scenario_.initial.omega, scenario_.envelope.rho_0,
      Vec3::Zero(), Vec3::Zero();
  const Evaluation ev = evaluate(x, 0.0);
  x.segment<3>(8) = ev.v;
  return x;
}

Evaluation Simulator::evaluate(const FullState& x, double t) const {
  const auto& sc = scenario_;
  const auto& cfg = sc.controller;
  if (!x.segment<4>(0).allFinite() || !(x.head<4>().norm() > 0.0)) throw SimulationAbort("attitude", t);
  if (!x.segment<3>(4).allFinite()) throw SimulationAbort("omega", t);
  if (!std::isfinite(x(7)) || !(x(7) > 0.0)) throw SimulationAbort("rho", t);
  if (!x.segment<3>(8).allFinite()) throw SimulationAbort("td.x1", t);
  if (!x.segment<3>(11).allFinite()) throw SimulationAbort("td.x2", t);

  Evaluation ev;
  ev.body.attitude = UnitQuaternion(quat_of(x));
  ev.body.omega = x.segment<3>(4);
  ev.rho = x(7);
  ev.td.x1 = x.segment<3>(8);
  ev.td.x2 = x.segment<3>(11);

  ev.geometry = observe(ev.body.attitude, sc.boresight, sc.goal_inertial, sc.obstacles);
  const auto& geo = ev.geometry;
  ev.x_e = geo.pointing_error();
  ev.x_e_dot = reduced_error_rate(geo.boresight, geo.goal, ev.body.omega);
  ev.eps = translated_error(ev.x_e, ev.rho);

  const std::vector<double> betas = geo.betas();
  if (sim_.controller_mode == ControllerMode::benchmark_apf) {
    ev.switches = {1.0, 1.0};
    ev.v = benchmark_virtual_law(geo, cfg);
  } else {
    if (!betas.empty()) ev.switches = effective_switches(switches_, betas);
    ev.v = virtual_law(geo, ev.eps, ev.rho, ev.switches.omega_v, cfg);
  }
  ev.e2 = ev.body.omega - ev.v;

  TorqueInputs in;
  in.eps_q = ev.eps;
  in.rho_q = ev.rho;
  in.omega_s = ev.switches.omega_s;
  in.omega_v = ev.switches.omega_v;
  in.e2 = ev.e2;
  in.sd_dot = ev.td.x2;
  const Vec3 raw = torque_law_unsaturated(ev.body, geo, in, sc.spacecraft, cfg);
  ev.torque = saturate(raw, sc.spacecraft.torque_limit());
  ev.saturated = (raw - ev.torque).cwiseAbs().maxCoeff() > 0.0;
  ev.disturbance = sim_.disturbance_enabled ? disturbance(t) : Vec3::Zero();

  ev.potential = total_potential(ev.x_e, cfg.k_a, sc.obstacles, betas);
  ev.V_q = blf_value(ev.eps, cfg.g, cfg.F) + ev.potential;
  ev.V_omega = 0.5 * ev.e2.dot(sc.spacecraft.inertia() * ev.e2);
  return ev;
}

FullState Simulator::coupled_rhs(const FullState& x, double t) const {
  const Evaluation ev = evaluate(x, t);
  const Quaternion q = quat_of(x);
  const Quaternion qd = q * Quaternion::pure(ev.body.omega);
  const Vec3 wd = dynamics_rhs(ev.body, ev.torque, ev.disturbance, scenario_.spacecraft);
  const double rhod = sppf_rhs({ev.rho, ev.eps}, scenario_.envelope, ev.switches.omega_s, ev.x_e,
                               ev.x_e_dot);
  const TdState tdd = td_rhs(ev.td, ev.v, scenario_.controller);

  FullState d;
  d << 0.5 * qd.x, 0.5 * qd.y, 0.5 * qd.z, 0.5 * qd.w, wd, rhod, tdd.x1, tdd.x2;
  return d;
}

FullState Simulator::step(const FullState& x, double t, double* raw_norm) const {
  const double h = sim_.dt;
  FullState next;
  if (sim_.integrator == Integrator::euler) {
    next = x + h * coupled_rhs(x, t);
  } else {
    const FullState k1 = coupled_rhs(x, t);
    const FullState k2 = coupled_rhs(x + 0.5 * h * k1, t + 0.5 * h);
    const FullState k3 = coupled_rhs(x + 0.5 * h * k2, t + 0.5 * h);
    const FullState k4 = coupled_rhs(x + h * k3, t + h);
    next = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  const double n = next.head<4>().norm();
  if (!std::isfinite(n) || !(n > 0.0)) throw SimulationAbort("attitude", t + h);
  if (raw_norm != nullptr) *raw_norm = n;
  next.head<4>() /= n;
  return next;
}

RunResult run_scenario(const Scenario& scenario, const SimConfig& sim) {
  const auto started = std::chrono::steady_clock::now();
  const Simulator simulator(scenario, sim);
  const auto& targets = scenario.targets;
  const std::size_t n_obs = scenario.obstacles.size();
  const long steps = std::lround(sim.duration / sim.dt);

  RunResult result;
  Summary& s = result.summary;
  s.scenario = scenario.name;
  s.controller_mode = sim.controller_mode;
  s.dt = sim.dt;
  s.duration = steps * sim.dt;
  s.min_clearance_deg.assign(n_obs, 180.0);

  long saturated_steps = 0;
  double last_unsettled_t = -1.0;
  bool have_prev = false;
  double prev_eps = 0.0;
  bool prev_frozen = false;

  FullState x = simulator.initial_state();
  for (long k = 0; k <= steps; ++k) {
    const double t = k * sim.dt;
    const Evaluation ev = simulator.evaluate(x, t);
    const double angle = pointing_angle_deg(ev.x_e);

    for (std::size_t i = 0; i < n_obs; ++i) {
      const double clearance = angle_deg_from_cos(ev.geometry.obstacles[i].beta);
      s.min_clearance_deg[i] = std::min(s.min_clearance_deg[i], clearance);
      if (ev.geometry.obstacles[i].beta > scenario.obstacles[i].forbidden_cosine()) {
        s.constraint_violated = true;
      }
    }
    if (angle >= targets.settle_deg) last_unsettled_t = t;
    if (t > targets.terminal_after_s) s.terminal_error_deg = std::max(s.terminal_error_deg, angle);

    const double os = ev.switches.omega_s;
    if (os == 0.0) s.max_abs_eps_ppc = std::max(s.max_abs_eps_ppc, std::abs(ev.eps));
    if (os < 0.5) s.max_abs_eps_low_switch = std::max(s.max_abs_eps_low_switch, std::abs(ev.eps));
    const bool frozen = os == 1.0;
    if (frozen && have_prev && prev_frozen) {
      s.mode2_time_s += sim.dt;
      s.mode2_max_eps_rate = std::max(s.mode2_max_eps_rate, std::abs(ev.eps - prev_eps) / sim.dt);
    }
    have_prev = true;
    prev_frozen = frozen;
    prev_eps = ev.eps;

    if (ev.saturated) ++saturated_steps;
    s.max_abs_torque = std::max(s.max_abs_torque, ev.torque.cwiseAbs().maxCoeff());
    s.max_quaternion_drift = std::max(s.max_quaternion_drift, std::abs(x.head<4>().norm() - 1.0));

    if (k % sim.record_stride == 0 || k == steps) {
      TrajectoryRecord r;
      r.t = t;
      r.x_e = ev.x_e;
      r.pointing_angle_deg = angle;
      r.beta = ev.geometry.betas();
      r.rho_q = ev.rho;
      r.eps_q = ev.eps;
      r.omega_s_eff = ev.switches.omega_s;
      r.omega_v_eff = ev.switches.omega_v;
      r.omega_body = ev.body.omega;
      r.torque = ev.torque;
      r.V_q = ev.V_q;
      r.V_omega = ev.V_omega;
      r.td_error = (ev.td.x1 - ev.v).norm();
      result.records.push_back(std::move(r));
    }
    if (k == steps) {
      s.final_error_deg = angle;
      s.final_x_e = ev.x_e;
      break;
    }

    double raw_norm = 1.0;
    x = simulator.step(x, t, &raw_norm);
    s.max_step_norm_error = std::max(s.max_step_norm_error, std::abs(raw_norm - 1.0));
  }

  s.saturation_fraction = static_cast<double>(saturated_steps) / static_cast<double>(steps + 1);
  if (last_unsettled_t < s.duration) {
    s.settling_time_s = last_unsettled_t < 0.0 ? 0.0 : last_unsettled_t + sim.dt;
  }

  if (s.constraint_violated) {
    s.targets_met = false;
    s.target_misses.push_back("keep-out cone entered");
  }
  if (targets.enabled) {
    if (s.settling_time_s < 0.0 || s.settling_time_s > targets.settle_by_s) {
      s.targets_met = false;
      s.target_misses.push_back("pointing error not below settle_deg by settle_by_s");
    }
    if (s.duration > targets.terminal_after_s && s.terminal_error_deg >= targets.terminal_deg) {
      s.targets_met = false;
      s.target_misses.push_back("terminal pointing error not below terminal_deg");
    }
  }

  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

LyapunovDiagnostics lyapunov_monitor(std::span<const TrajectoryRecord> records,
                                     const LyapunovOptions& options) {
  LyapunovDiagnostics out;
  out.t.reserve(records.size());
  out.V.reserve(records.size());
  for (const auto& r : records) {
    out.t.push_back(r.t);
    out.V.push_back(r.V_q + r.V_omega);
  }
  out.max_V_dot = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < records.size(); ++k) {
    const double vdot = (out.V[k + 1] - out.V[k]) / (out.t[k + 1] - out.t[k]);
    out.V_dot.push_back(vdot);
    if (records[k].t < options.transient_s) continue;
    if (records[k].pointing_angle_deg <= options.terminal_ball_deg) continue;
    ++out.steps_considered;
    out.max_V_dot = std::max(out.max_V_dot, vdot);
    if (vdot > options.tolerance) ++out.steps_increasing;
  }
  if (out.steps_considered > 0) {
    out.increasing_fraction =
        static_cast<double>(out.steps_increasing) / static_cast<double>(out.steps_considered);
  } else {
    out.max_V_dot = 0.0;
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryRecord> records) {
  const std::size_t n_obs = records.empty() ? 0 : records.front().beta.size();
  out << "t,x_e,pointing_angle_deg";
  for (std::size_t i = 0; i < n_obs; ++i) out << ",beta_" << (i + 1);
  out << ",rho_q,eps_q,omega_s_eff,omega_v_eff,omega_x,omega_y,omega_z,"
         "torque_x,torque_y,torque_z,V_q,V_omega,td_error\n";
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (const auto& r : records) {
    put(r.t);
    out << ',';
    put(r.x_e);
    out << ',';
    put(r.pointing_angle_deg);
    for (double b : r.beta) {
      out << ',';
      put(b);
    }
    for (double v : {r.rho_q, r.eps_q, r.omega_s_eff, r.omega_v_eff, r.omega_body.x(),
                     r.omega_body.y(), r.omega_body.z(), r.torque.x(), r.torque.y(), r.torque.z(),
                     r.V_q, r.V_omega, r.td_error}) {
      out << ',';
      put(v);
    }
    out << '\n';
  }
}

}  // namespace conepoint
