#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "config.hpp"
#include "experiments.hpp"

using namespace papal;
using namespace papal::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("papal_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "papal");
  return main_entry(args);
}

const std::vector<std::string> kQuick = {"--override", "solver.lambda1=1", "--override", "solver.lambda2=1",
                                         "--override", "solver.T=3",       "--override", "solver.M=100",
                                         "--override", "sampler.iterations=20", "--override",
                                         "grid.nodes=128"};

std::vector<std::string> quick(std::vector<std::string> head) {
  head.insert(head.end(), kQuick.begin(), kQuick.end());
  return head;
}

}  // namespace

TEST(Config, ParsesSectionsAndOverrides) {
  auto c = ConfigMap::from_string("[solver]\nlambda1 = 0.5\nT = 7\n[experiment]\nname = sine-shifted\n");
  EXPECT_DOUBLE_EQ(c.get_double("solver.lambda1", 0), 0.5);
  EXPECT_EQ(c.get_int("solver.T", 0), 7);
  c.apply_override("solver.T=9");
  EXPECT_EQ(c.get_int("solver.T", 0), 9);
  EXPECT_THROW(c.apply_override("no-equals-sign"), ConfigError);
}

TEST(Config, BadValueNamesKey) {
  const auto c = ConfigMap::from_string("[solver]\nT = many\n");
  try {
    c.get_int("solver.T", 1);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("solver.T"), std::string::npos);
  }
}

TEST(Config, UnknownKeyIsRejected) {
  const auto c = ConfigMap::from_string("[solver]\nlambda1 = 1\nlambda2 = 1\nlamda3 = 2\n");
  try {
    build_spec(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("lamda3"), std::string::npos);
  }
}

TEST(Config, MissingLambda2IsNamed) {
  const auto c = ConfigMap::from_string("[solver]\nlambda1 = 1\n");
  try {
    build_spec(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("lambda2"), std::string::npos);
  }
}

TEST(Config, ExperimentDefaults) {
  auto c = ConfigMap::from_string("[solver]\nlambda1 = 1\nlambda2 = 1\n[experiment]\nname = landscape-demo\n");
  const auto spec = build_spec(c);
  EXPECT_EQ(spec.game_id, "landscape-min");
  EXPECT_TRUE(spec.baseline.enabled);
  c.set("experiment.name", "bogus");
  EXPECT_THROW(build_spec(c), ConfigError);
}

TEST(Cli, MissingLambda2ExitsWithConfigError) {
  const auto dir = fresh_dir("missing");
  EXPECT_EQ(run({"run", "-e", "sine-symmetric", "-o", dir.string(), "--override", "solver.lambda1=1"}),
            kExitConfig);
  const auto err = json::parse(slurp(dir / "error.json"));
  EXPECT_EQ(err["exit_code"], 2);
  EXPECT_NE(err["message"].get<std::string>().find("lambda2"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, UnknownFlagIsConfigError) {
  EXPECT_EQ(run({"run", "--no-such-flag"}), kExitConfig);
  EXPECT_EQ(run({}), kExitConfig);
}

TEST(Cli, SameSeedGivesByteIdenticalTrace) {
  const auto a = fresh_dir("seed_a"), b = fresh_dir("seed_b");
  ASSERT_EQ(run(quick({"run", "-e", "sine-shifted", "--seed", "1", "-o", a.string()})), kExitOk);
  ASSERT_EQ(run(quick({"run", "-e", "sine-shifted", "--seed", "1", "-o", b.string()})), kExitOk);
  EXPECT_EQ(slurp(a / "trace.csv"), slurp(b / "trace.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, SummaryFollowsSchema) {
  const auto dir = fresh_dir("summary");
  ASSERT_EQ(run(quick({"run", "-e", "sine-shifted", "-o", dir.string()})), kExitOk);
  const auto s = json::parse(slurp(dir / "summary.json"));
  for (const char* key : {"experiment", "version", "seed", "inputs", "game", "final_gap", "papal", "wall_ms"}) {
    EXPECT_TRUE(s.contains(key)) << key;
  }
  EXPECT_EQ(s["inputs"]["solver.T"], "3");
  EXPECT_TRUE(s["reference"].contains("tv_p"));
  EXPECT_GE(s["final_gap"].get<double>(), -1e-6);
  EXPECT_NE(s["version"].get<std::string>().find('+'), std::string::npos);

  std::ifstream trace(dir / "trace.csv");
  std::string line;
  std::getline(trace, line);
  EXPECT_EQ(line, "t,gap_estimate,sup_norm_h,sup_norm_g,inner_accept_rate,wall_ms");
  int rows = 0;
  while (std::getline(trace, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
  fs::remove_all(dir);
}

TEST(Cli, EnvironmentSetsOutputDirectory) {
  const auto dir = fresh_dir("env");
  ::setenv("PAPAL_OUT_DIR", dir.string().c_str(), 1);
  const int code = run(quick({"run", "-e", "sine-symmetric"}));
  ::unsetenv("PAPAL_OUT_DIR");
  EXPECT_EQ(code, kExitOk);
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  fs::remove_all(dir);
}

TEST(Cli, CheckpointsAreWritten) {
  const auto dir = fresh_dir("ckpt");
  ASSERT_EQ(run(quick({"run", "-e", "sine-shifted", "-o", dir.string(), "--override",
                       "solver.checkpoint_every=1"})),
            kExitOk);
  EXPECT_TRUE(fs::exists(dir / "checkpoints" / "t3_x.csv"));
  fs::remove_all(dir);
}

TEST(Cli, ConfigFileIsRead) {
  const auto dir = fresh_dir("file");
  fs::create_directories(dir);
  std::ofstream(dir / "c.ini") << "[experiment]\nname = sine-symmetric\n[solver]\nlambda1 = 1\nlambda2 = 1\n"
                                  "T = 2\nM = 50\n[sampler]\niterations = 5\n[grid]\nnodes = 64\n";
  ASSERT_EQ(run({"run", "--config", (dir / "c.ini").string(), "-o", (dir / "out").string()}), kExitOk);
  EXPECT_EQ(json::parse(slurp(dir / "out" / "summary.json"))["experiment"], "sine-symmetric");
  fs::remove_all(dir);
}

TEST(ScheduleReport, GoldenMuAndRoundTrip) {
  const auto r = schedule_report(1, 1, 1, 1, 0.1, 1, 20, 0.1, 1, 1);
  EXPECT_NEAR(r["mu"].get<double>(), 0.381966, 1e-6);
  const auto back = json::parse(r.dump());
  for (const char* key : {"mu", "tau", "eta", "iota", "T_t_x", "T_t_y"}) {
    const double a = r[key].get<double>(), b = back[key].get<double>();
    EXPECT_LE(std::abs(a - b), 1e-15 * std::abs(a)) << key;
  }
  EXPECT_TRUE(r["lsi"].contains("alpha_q"));
}

TEST(ScheduleReport, SampleSizeScalesWithEpsilon) {
  const auto a = schedule_report(1, 1, 1, 1, 0.1, 1, 20, 0.1, 1, 1);
  const auto b = schedule_report(1, 1, 1, 1, 0.05, 1, 20, 0.1, 1, 1);
  EXPECT_GE(b["M"].get<double>() / a["M"].get<double>(), 4.0);
}

TEST(ScheduleReport, SubcommandWritesSummary) {
  const auto dir = fresh_dir("report");
  ASSERT_EQ(run({"schedule-report", "-o", dir.string(), "--override", "solver.lambda1=1", "--override",
                 "solver.lambda2=1"}),
            kExitOk);
  const auto s = json::parse(slurp(dir / "summary.json"));
  EXPECT_NEAR(s["report"]["mu"].get<double>(), 0.381966, 1e-6);
  fs::remove_all(dir);
}

TEST(ScheduleReport, UnderflowExitsWithNumericalError) {
  const auto dir = fresh_dir("underflow");
  EXPECT_EQ(run({"schedule-report", "-o", dir.string(), "--override", "solver.lambda1=1", "--override",
                 "solver.lambda2=0.01"}),
            kExitNumerical);
  EXPECT_EQ(json::parse(slurp(dir / "error.json"))["error"], "numerical");
  fs::remove_all(dir);
}
