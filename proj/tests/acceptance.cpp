// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "conepoint/envelope.hpp"
#include "fd_oracle.hpp"
#include "conepoint/presets.hpp"
#include "conepoint/scenario_io.hpp"
#include "conepoint/simulation.hpp"

using namespace conepoint;

namespace {

int failures = 0;

void report(int id, const char* title, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s  [%s]\n", id, pass ? "PASS" : "FAIL", title, detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string csv_of(const RunResult& r) {
  std::ostringstream os;
  write_trajectory_csv(os, r.records);
  return os.str();
}

struct NamedRun {
  std::string name;
  Scenario scenario;
  RunResult result;
};

}  // namespace

int main() {
  std::vector<NamedRun> presets;
  for (const auto& p : list_presets()) {
    Scenario sc = load_preset(p.name).scenario;
    sc.sim.dt = 0.01;
    RunResult r = run_scenario(sc);
    presets.push_back({p.name, sc, std::move(r)});
  }
  const Scenario on_path =
      load_scenario(std::string(CONEPOINT_SCENARIO_DIR) + "/on_path_obstacle.json").scenario;
  std::vector<NamedRun> extended = presets;
  extended.push_back({on_path.name, on_path, run_scenario(on_path)});

  {
    bool pass = true;
    double worst = 1e9, slowest = 0.0;
    for (const auto& run : presets) {
      if (run.scenario.compare_with_benchmark) continue;
      const Summary& s = run.result.summary;
      for (std::size_t i = 0; i < s.min_clearance_deg.size(); ++i) {
        const double theta_f_deg = run.scenario.obstacles[i].theta_f() * 180.0 / M_PI;
        worst = std::min(worst, s.min_clearance_deg[i] - theta_f_deg);
        pass &= s.min_clearance_deg[i] >= theta_f_deg && !s.constraint_violated;
      }
      slowest = std::max(slowest, run.result.wall_time_s);
      pass &= run.result.wall_time_s <= 10.0;
    }
    report(1, "keep-out cones never entered on the 8 scenario presets", pass,
           fmt("smallest margin over theta_f %.3f deg", worst) + fmt(", slowest run %.3f s", slowest));
  }

  {
    const Summary& s = presets[0].result.summary;
    const bool pass = s.settling_time_s >= 0.0 && s.settling_time_s <= 50.0 && s.terminal_error_deg < 0.1;
    report(2, "paper-single-1 below 1 deg by 50 s and below 0.1 deg after 80 s", pass,
           fmt("settled at %.2f s", s.settling_time_s) + fmt(", terminal %.4f deg", s.terminal_error_deg));
  }

  {
    const NamedRun& cmp = presets.back();
    SimConfig bench = cmp.scenario.sim;
    bench.controller_mode = ControllerMode::benchmark_apf;
    const Summary b = run_scenario(cmp.scenario, bench).summary;
    const Summary& p = cmp.result.summary;
    const bool pass = p.terminal_error_deg < b.terminal_error_deg && p.terminal_error_deg <= 0.1;
    report(3, "paper-compare-1 proposed terminal error below benchmark and <= 0.1 deg", pass,
           fmt("proposed %.4f deg", p.terminal_error_deg) + fmt(", benchmark %.4f deg", b.terminal_error_deg));
  }

  {
    Scenario sc = presets[0].scenario;
    sc.obstacles.clear();
    SimConfig cfg = sc.sim;
    cfg.duration = 50.0;
    cfg.record_stride = 1;
    const RunResult r = run_scenario(sc, cfg);
    double worst = 0.0;
    for (int t : {1, 10, 50}) {
      const auto& rec = r.records.at(static_cast<std::size_t>(t * 100));
      const double expect =
          sc.envelope.rho_inf + (sc.envelope.rho_0 - sc.envelope.rho_inf) * std::exp(-sc.envelope.k_rho * rec.t);
      worst = std::max(worst, std::abs(rec.rho_q - expect));
    }
    report(4, "free envelope decay matches the exponential at t = 1, 10, 50 s", worst < 1e-8,
           fmt("max deviation %.3e", worst));
  }

  {
    double worst = 0.0, frozen_time = 0.0;
    for (const auto& run : extended) {
      worst = std::max(worst, run.result.summary.mode2_max_eps_rate);
      frozen_time += run.result.summary.mode2_time_s;
    }
    report(5, "translated error frozen while Omega_s = 1", worst < 1e-6 && frozen_time > 0.0,
           fmt("max |d eps|/dt %.3e", worst) + fmt(" over %.2f s of frozen segments", frozen_time));
  }

  {
    bool pass = true;
    double worst_rel = 0.0, worst_over = -1e9;
    std::size_t points = 0;
    std::vector<ObstacleCone> cones;
    for (const auto& run : extended) cones.insert(cones.end(), run.scenario.obstacles.begin(), run.scenario.obstacles.end());
    for (const auto& c : cones) {
      for (double b = c.L0() + 1e-4; b < c.L1(); b += 1e-4) {
        const double fd = oracle::repulsion_slope_fd(c, b);
        const double a = repulsion_grad_beta(c, b);
        if (fd != 0.0) worst_rel = std::max(worst_rel, std::abs(a - fd) / std::abs(fd));
        else worst_rel = std::max(worst_rel, std::abs(a) > 1e-300 ? 1.0 : 0.0);
        worst_over = std::max(worst_over, a - c.r_slope());
        ++points;
      }
    }
    pass = worst_rel < 1e-5 && worst_over <= 1e-9;
    report(6, "repulsion gradient matches central differences and stays <= r", pass,
           std::to_string(points) + fmt(" grid points, max rel error %.3e", worst_rel) +
               fmt(", max (grad - r) %.3e", worst_over));
  }

  {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    double lowest = 1e9;
    for (int k = 0; k < 10000; ++k) {
      const double x = u(rng);
      lowest = std::min(lowest, x * std::tanh(x) - log_cosh(x));
    }
    report(7, "x tanh x - ln cosh x >= 0 on 10^4 samples in [0, 100]", lowest >= 0.0, fmt("minimum %.3e", lowest));
  }

  {
    double worst = 0.0;
    for (const auto& run : extended) worst = std::max(worst, run.result.summary.max_abs_eps_low_switch);
    report(8, "|eps_q| < 1 wherever Omega_s_eff < 0.5", worst < 1.0, fmt("max |eps_q| %.4f", worst));
  }

  {
    double worst = 0.0;
    for (const auto& run : extended) worst = std::max(worst, run.result.summary.max_abs_torque);
    report(9, "every torque component within +-0.5 N m", worst <= 0.5, fmt("max |u_i| %.6f", worst));
  }

  {
    bool identical = true;
    double drift = 0.0;
    for (const auto& run : extended) {
      identical &= csv_of(run_scenario(run.scenario)) == csv_of(run.result);
      drift = std::max({drift, run.result.summary.max_quaternion_drift, run.result.summary.max_step_norm_error});
    }
    double halving = 0.0;
    for (const auto& run : extended) {
      SimConfig half = run.scenario.sim;
      half.dt *= 0.5;
      half.record_stride *= 2;
      halving = std::max(halving, std::abs(run_scenario(run.scenario, half).summary.final_x_e -
                                           run.result.summary.final_x_e));
    }
    report(10, "bit-identical reruns, quaternion drift < 1e-9, step halving moves final x_e < 1e-6",
           identical && drift < 1e-9 && halving < 1e-6,
           std::string(identical ? "identical" : "DIFFERENT") + fmt(", drift %.3e", drift) +
               fmt(", halving delta %.3e", halving));
  }

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
