#include "conepoint/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "conepoint/errors.hpp"
#include "conepoint/presets.hpp"
#include "conepoint/scenario_io.hpp"
#include "conepoint/simulation.hpp"

namespace conepoint::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunOptions {
  std::string scenario_path;
  std::string preset;
  std::string out_dir;
  std::string tuning_path;
  bool compare = false;
  bool all_presets = false;
  std::optional<double> dt;
  std::optional<double> duration;
  bool no_disturbance = false;
  int seed = 0;
};

// Result of one scenario run, kept in memory so parallel runs print in order.
struct Outcome {
  std::string name;
  int code = kExitOk;
  std::string log;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json comparison_json(const Summary& proposed, const Summary& benchmark) {
  return {{"scenario", proposed.scenario},
          {"proposed", summary_to_json(proposed)},
          {"benchmark", summary_to_json(benchmark)},
          {"proposed_terminal_error_deg", proposed.terminal_error_deg},
          {"benchmark_terminal_error_deg", benchmark.terminal_error_deg},
          {"proposed_better", proposed.terminal_error_deg < benchmark.terminal_error_deg}};
}

Outcome execute(const LoadedScenario& loaded, const RunOptions& opt, const fs::path& out_dir) {
  Outcome res;
  Scenario sc = loaded.scenario;
  res.name = sc.name;
  std::ostringstream log;
  for (const auto& w : loaded.warnings) log << "warning: " << w << "\n";

  if (opt.dt) sc.sim.dt = *opt.dt;
  if (opt.duration) sc.sim.duration = *opt.duration;
  if (opt.no_disturbance) sc.sim.disturbance_enabled = false;
  try {
    sc.sim.validate();
  } catch (const InvalidParameter& e) {
    log << "error: sim: " << e.what() << "\n";
    res.code = kExitValidation;
    res.log = log.str();
    return res;
  }

  const bool compare = opt.compare || sc.compare_with_benchmark;
  try {
    SimConfig sim = sc.sim;
    sim.controller_mode = ControllerMode::proposed;
    const RunResult proposed = run_scenario(sc, sim);
    std::optional<RunResult> bench;
    if (compare) {
      sim.controller_mode = ControllerMode::benchmark_apf;
      bench = run_scenario(sc, sim);
    }

    json summary = summary_to_json(proposed.summary);
    summary["warnings"] = loaded.warnings;
    summary["validation"] = report_to_json(sc.validate());
    summary["wall_time_s"] = proposed.wall_time_s;

    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      std::ofstream csv(out_dir / "trajectory.csv");
      write_trajectory_csv(csv, proposed.records);
      write_text(out_dir / "summary.json", dump(summary));
      if (bench) {
        std::ofstream bcsv(out_dir / "trajectory_benchmark.csv");
        write_trajectory_csv(bcsv, bench->records);
        write_text(out_dir / "comparison.json", dump(comparison_json(proposed.summary, bench->summary)));
      }
    }

    const Summary& s = proposed.summary;
    log << s.scenario << ": terminal error " << s.terminal_error_deg << " deg, settling "
        << (s.settling_time_s < 0 ? std::string("never") : std::to_string(s.settling_time_s) + " s")
        << ", min clearance";
    for (double c : s.min_clearance_deg) log << " " << c;
    log << " deg, wall " << proposed.wall_time_s << " s\n";
    if (bench) {
      log << s.scenario << ": benchmark terminal error " << bench->summary.terminal_error_deg << " deg\n";
      if (out_dir.empty()) log << dump(comparison_json(proposed.summary, bench->summary));
    } else if (out_dir.empty()) {
      log << dump(summary);
    }
    if (s.constraint_violated) {
      log << "error: pointing constraint violated\n";
      res.code = kExitTargetMiss;
    }
    for (const auto& miss : s.target_misses) log << "target missed: " << miss << "\n";
    if (!s.targets_met) res.code = kExitTargetMiss;
  } catch (const SimulationAbort& e) {
    log << "error: numeric abort at t=" << e.time() << " (" << e.field() << "): " << e.what() << "\n";
    res.code = kExitNumeric;
  }
  res.log = log.str();
  return res;
}

int run_command(const RunOptions& opt) {
  json tuning = reference_tuning();
  std::vector<LoadedScenario> scenarios;
  try {
    if (!opt.tuning_path.empty()) tuning = read_json_file(opt.tuning_path);
    if (opt.all_presets) {
      for (const auto& p : list_presets()) scenarios.push_back(load_preset(p.name, tuning));
    } else if (!opt.preset.empty()) {
      if (!is_preset(opt.preset)) throw InvalidInput("unknown preset '" + opt.preset + "'");
      scenarios.push_back(load_preset(opt.preset, tuning));
    } else {
      scenarios.push_back(load_scenario(opt.scenario_path));
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ValidationError& e) {
    std::cerr << "error: scenario failed validation\n";
    for (const auto& i : e.issues()) std::cerr << "  " << i << "\n";
    return kExitValidation;
  }

  const fs::path base = opt.out_dir;
  std::vector<Outcome> outcomes(scenarios.size());
  if (scenarios.size() == 1) {
    outcomes[0] = execute(scenarios[0], opt, base);
  } else {
    // Runs are independent; a small pool pulls scenario indices in turn.
    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                             static_cast<unsigned>(scenarios.size())));
    std::mutex mu;
    std::size_t next = 0;
    std::vector<std::future<void>> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.push_back(std::async(std::launch::async, [&] {
        for (;;) {
          std::size_t i;
          {
            std::lock_guard lock(mu);
            if (next >= scenarios.size()) return;
            i = next++;
          }
          const fs::path dir = base.empty() ? fs::path() : base / scenarios[i].scenario.name;
          outcomes[i] = execute(scenarios[i], opt, dir);
        }
      }));
    }
    for (auto& f : pool) f.get();
  }

  int code = kExitOk;
  for (const auto& o : outcomes) {
    std::cout << o.log;
    code = std::max(code, o.code);
  }
  return code;
}

int show_preset(const std::string& name, const std::string& tuning_path) {
  try {
    const json tuning = tuning_path.empty() ? reference_tuning() : read_json_file(tuning_path);
    std::cout << dump(scenario_to_json(load_preset(name, tuning).scenario));
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ValidationError& e) {
    for (const auto& i : e.issues()) std::cerr << "  " << i << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Constrained attitude reorientation simulator"};
  app.require_subcommand(1);

  RunOptions opt;
  auto* run_cmd = app.add_subcommand("run", "simulate a scenario file or preset");
  auto* src_scn = run_cmd->add_option("--scenario", opt.scenario_path, "scenario JSON file");
  auto* src_pre = run_cmd->add_option("--preset", opt.preset, "built-in preset name");
  auto* src_all = run_cmd->add_flag("--all-presets", opt.all_presets, "run every preset in parallel");
  src_scn->excludes(src_pre)->excludes(src_all);
  src_pre->excludes(src_all);
  run_cmd->add_option("--out", opt.out_dir, "output directory (trajectory.csv, summary.json, comparison.json)");
  run_cmd->add_flag("--compare", opt.compare, "also run the APF-only benchmark controller");
  run_cmd->add_option("--dt", opt.dt, "step size override, s")->check(CLI::PositiveNumber);
  run_cmd->add_option("--duration", opt.duration, "duration override, s")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--no-disturbance", opt.no_disturbance, "disable the disturbance torque");
  run_cmd->add_option("--seed", opt.seed, "reserved; runs are deterministic");
  run_cmd->add_option("--tuning", opt.tuning_path, "tuning JSON replacing the built-in reference tuning");

  auto* list_cmd = app.add_subcommand("list-presets", "print preset names and descriptions");

  std::string show_name;
  std::string show_tuning;
  auto* show_cmd = app.add_subcommand("show-preset", "print a preset as a scenario file");
  show_cmd->add_option("name", show_name, "preset name")->required();
  show_cmd->add_option("--tuning", show_tuning, "tuning JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  if (list_cmd->parsed()) {
    for (const auto& p : list_presets()) std::cout << p.name << "  " << p.description << "\n";
    return kExitOk;
  }
  if (show_cmd->parsed()) return show_preset(show_name, show_tuning);
  if (opt.scenario_path.empty() && opt.preset.empty() && !opt.all_presets) {
    std::cerr << "error: one of --scenario, --preset or --all-presets is required\n";
    return kExitParse;
  }
  return run_command(opt);
}

}  // namespace conepoint::cli
