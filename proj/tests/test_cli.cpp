#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string output;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(CONEPOINT_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("conepoint_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST(Cli, ListPresets) {
  const Result r = run("list-presets");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.output.find("paper-single-1"), std::string::npos);
  EXPECT_NE(r.output.find("paper-three-1"), std::string::npos);
  EXPECT_NE(r.output.find("paper-compare-1"), std::string::npos);
}

TEST(Cli, RunPresetWritesArtifacts) {
  const fs::path dir = scratch("run");
  const Result r = run("run --preset paper-single-1 --out " + dir.string());
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(fs::exists(dir / "trajectory.csv"));
  const auto s = read_json(dir / "summary.json");
  EXPECT_TRUE(s["targets_met"].get<bool>());
  EXPECT_FALSE(s["constraint_violated"].get<bool>());
}

TEST(Cli, CompareOrdersTerminalErrors) {
  const fs::path dir = scratch("compare");
  const Result r = run("run --preset paper-single-1 --compare --out " + dir.string());
  EXPECT_EQ(r.code, 0) << r.output;
  const auto c = read_json(dir / "comparison.json");
  EXPECT_LT(c["proposed_terminal_error_deg"].get<double>(), c["benchmark_terminal_error_deg"].get<double>());
  EXPECT_TRUE(c["proposed_better"].get<bool>());
  EXPECT_TRUE(fs::exists(dir / "trajectory_benchmark.csv"));
}

TEST(Cli, InvalidScenarioExitsThree) {
  const fs::path dir = scratch("bad");
  std::ofstream(dir / "bad.json") << R"({"spacecraft": {"torque_limit": 0.5}, "goal": [1, 0, 0]})";
  const Result r = run("run --scenario " + (dir / "bad.json").string());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.output.find("spacecraft.inertia"), std::string::npos);
  EXPECT_NE(r.output.find("controller"), std::string::npos);
}

TEST(Cli, MalformedJsonExitsTwo) {
  const fs::path dir = scratch("malformed");
  std::ofstream(dir / "m.json") << "{ not json";
  EXPECT_EQ(run("run --scenario " + (dir / "m.json").string()).code, 2);
  EXPECT_EQ(run("run --preset no-such-preset").code, 2);
  EXPECT_EQ(run("run --bogus-flag").code, 2);
  EXPECT_EQ(run("run").code, 2);
}

TEST(Cli, TargetMissExitsFive) {
  const Result r = run("run --preset paper-single-1 --duration 20");
  EXPECT_EQ(r.code, 5) << r.output;
  EXPECT_NE(r.output.find("target missed"), std::string::npos);
}

TEST(Cli, NumericAbortExitsFour) {
  const fs::path dir = scratch("abort");
  auto j = nlohmann::json::parse(run("show-preset paper-single-1").output);
  j["sim"]["dt"] = 50.0;
  j["sim"]["duration"] = 5000.0;
  j["sim"]["integrator"] = "euler";
  std::ofstream(dir / "s.json") << j.dump();
  EXPECT_EQ(run("run --scenario " + (dir / "s.json").string()).code, 4);
}

TEST(Cli, AllPresetsInParallel) {
  const fs::path dir = scratch("all");
  const Result r = run("run --all-presets --out " + dir.string());
  EXPECT_EQ(r.code, 0) << r.output;
  for (const char* p : {"paper-single-1", "paper-two-4", "paper-three-1"}) {
    EXPECT_TRUE(fs::exists(dir / p / "summary.json")) << p;
  }
  EXPECT_TRUE(fs::exists(dir / "paper-compare-1" / "comparison.json"));
}

TEST(Cli, ShowPresetRoundTrips) {
  const fs::path dir = scratch("show");
  const Result r = run("show-preset paper-two-3");
  ASSERT_EQ(r.code, 0);
  std::ofstream(dir / "p.json") << r.output;
  const Result again = run("run --scenario " + (dir / "p.json").string() + " --duration 1");
  EXPECT_NE(again.code, 2);
  EXPECT_NE(again.code, 3);
}
