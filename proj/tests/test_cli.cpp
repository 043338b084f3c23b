#include "amcf/config.hpp"
#include "amcf/dispatch.hpp"
#include "amcf/errors.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace amcf;
namespace fs = std::filesystem;

namespace {

std::string parse_error(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    (void)parse_config(text, overrides);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "config parsed without error";
  return {};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("amcf_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  int run(const std::string& args) const {
    const std::string cmd = std::string(AMCF_CLI_PATH) + " " + args + " > " +
                            (dir_ / "stdout.txt").string() + " 2> " +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const fs::path& p) const {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

}  // namespace

TEST(Config, MinimalTextTakesDefaults) {
  const RunConfig c = parse_config("[grid]\nN = 2\nh = 0.05\n");
  RunConfig expected;
  expected.grid.dim = 2;
  expected.grid.h = 0.05;
  EXPECT_EQ(c, expected);
  EXPECT_EQ(c.flow.cfl_factor, 0.25);
  EXPECT_EQ(c.anisotropy.family, "euclidean");
  EXPECT_EQ(c.output_dir, "out");
  EXPECT_FALSE(c.seed.has_value());
}

TEST(Config, EmitRoundTripsEveryKey) {
  const std::string text =
      "# comment\n"
      "[anisotropy]\nfamily = elliptic\nmatrix = 2, 0.3, 0.3, 1\n"
      "[mobility]\nfamily = power\nexponent = 3.5\n"
      "[grid]\nN = 1\nh = 0.01\nhalf_width = 4\nperiod = 12\ncount = 64\nboundary = periodic\n"
      "[flow]\ncfl_factor = 0.4\nend_time = 2.5\nsnapshot_every = 10\nsnapshot_dt = 0.1\n"
      "tol_stat = 1e-9\n"
      "[experiment]\nid = scaling\ncone = max_affine\nslopes = 1, -0.5\nperturbation = sublinear\n"
      "K = 0.3\ndelta = 0.25\nwidth = 3\namplitude = 0.7\noffset = 0.2\nt1 = 0.5\nt2 = 2\n"
      "radius = 1.5\npairs = 17\nthreshold = 0.001\nseed = 42\n"
      "[output]\ndir = results/run 1\n";
  const RunConfig c = parse_config(text);
  EXPECT_EQ(c.anisotropy.matrix, (std::vector<double>{2.0, 0.3, 0.3, 1.0}));
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.output_dir, "results/run 1");
  const std::string emitted = emit_config(c);
  EXPECT_EQ(parse_config(emitted), c);
  EXPECT_EQ(emit_config(parse_config(emitted)), emitted);
}

TEST(Config, ErrorsNameLineAndKey) {
  EXPECT_EQ(parse_error("[grid]\nN = 1\nfoo = 3\nh = 0.1\n"), "line 3: unknown key 'foo' in [grid]");
  EXPECT_EQ(parse_error("[grid]\nh = 0.1\n"), "missing required key grid.N");
  EXPECT_EQ(parse_error("[grid]\nN = 1\n"), "missing required key grid.h");
  EXPECT_EQ(parse_error("[grid]\nN = 1\nh = 0.1\n[experiment]\nperturbation = sublinear\n"
                        "delta = 1.5\n"),
            "line 6, key experiment.delta: delta out of (0,1)");
  EXPECT_EQ(parse_error("[grid]\nN = 1\nh = 0.1\n[flow]\ncfl_factor = 0.9\n"),
            "line 5, key flow.cfl_factor: cfl_factor out of (0,0.5]");
  EXPECT_EQ(parse_error("[grid]\nN = 1\nN = 2\nh = 0.1\n"), "line 3: duplicate key grid.N");
  EXPECT_EQ(parse_error("[grid]\nN = 1\nh = abc\n").rfind("line 3, key grid.h", 0), 0u);
  EXPECT_EQ(parse_error("[nope]\n"), "line 1: unknown section [nope]");
  EXPECT_EQ(parse_error("[grid]\nN = 3\nh = 0.1\n"), "line 2, key grid.N: N must be 1 or 2");
}

TEST(Config, OverridesReplaceFileValues) {
  const RunConfig c =
      parse_config("[grid]\nN = 1\nh = 0.1\n", {"grid.h=0.05", "experiment.id = expander"});
  EXPECT_EQ(c.grid.h, 0.05);
  EXPECT_EQ(c.experiment.id, "expander");
  EXPECT_EQ(parse_error("[grid]\nN = 1\nh = 0.1\n", {"flow.cfl_factor=2"}),
            "override flow.cfl_factor: cfl_factor out of (0,0.5]");
  EXPECT_EQ(parse_error("[grid]\nN = 1\nh = 0.1\n", {"grid.bogus=1"}).find("unknown key grid.bogus") !=
                std::string::npos,
            true);
}

TEST(Config, FactoriesBuildModels) {
  const RunConfig c = parse_config(
      "[anisotropy]\nfamily = power\nexponent = 4\n[mobility]\nfamily = elliptic\n"
      "matrix = 1, 0, 0, 2\n[grid]\nN = 1\nh = 0.1\n[experiment]\ncone = abs\nslope = 0.5\n"
      "perturbation = offset\noffset = 0.3\n");
  EXPECT_EQ(make_anisotropy(c).name(), "power(4)");
  EXPECT_EQ(make_mobility(c).dimension(), 2);
  EXPECT_NEAR(make_mobility(c).psi_max(), std::sqrt(2.0), 1e-9);
  EXPECT_EQ(make_cone(c)({-2.0, 0.0}), 1.0);
  const auto p = make_perturbation(c);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(std::get<perturbation::BoundedOffset>(*p).m, 0.3);
  EXPECT_FALSE(make_perturbation(parse_config("[grid]\nN = 1\nh = 0.1\n")).has_value());
  EXPECT_EQ(make_flow_params(c).cfl_factor, 0.25);
}

TEST(Dispatch, CommandsAndExitCodes) {
  EXPECT_EQ(parse_command("barrier-check"), Command::BarrierCheck);
  EXPECT_EQ(parse_command("suite"), Command::Suite);
  EXPECT_FALSE(parse_command("bogus").has_value());
  EXPECT_EQ(exit_code(ErrorKind::Parse), 2);
  EXPECT_EQ(exit_code(ErrorKind::Domain), 2);
  EXPECT_EQ(exit_code(ErrorKind::Convergence), 3);
  EXPECT_EQ(exit_code(ErrorKind::Numerical), 3);
  EXPECT_EQ(exit_code(ErrorKind::Assertion), 4);
}

TEST_F(CliTest, OracleWritesReportAndResolvedConfig) {
  const fs::path out = dir_ / "out";
  EXPECT_EQ(run("oracle --out " + out.string()), 0) << read(dir_ / "stderr.txt");
  EXPECT_TRUE(fs::exists(out / "grim_reaper_metrics.csv"));
  EXPECT_TRUE(fs::exists(out / "grim_reaper_summary.txt"));
  const RunConfig resolved = parse_config(read(out / "config.ini"));
  EXPECT_EQ(resolved.output_dir, out.string());
  EXPECT_EQ(read(out / "grim_reaper_metrics.csv").rfind("experiment,metric,value", 0), 0u);
}

TEST_F(CliTest, ExpanderOdeOracle) {
  const fs::path cfg = write("ode.ini", "[grid]\nN = 1\nh = 0.1\n[experiment]\nid = expander_ode\nslope = 1\n");
  EXPECT_EQ(run("oracle --config " + cfg.string() + " --out " + (dir_ / "o").string()), 0);
  EXPECT_NE(read(dir_ / "o" / "expander_ode_summary.txt").find("w0"), std::string::npos);
}

TEST_F(CliTest, FlowRunWritesSnapshots) {
  const fs::path cfg = write("flow.ini",
                             "[grid]\nN = 1\nh = 0.1\nhalf_width = 2\n[flow]\nend_time = 0.2\n"
                             "snapshot_dt = 0.1\n[experiment]\nid = flow\n");
  EXPECT_EQ(run("run --config " + cfg.string() + " --out " + (dir_ / "f").string()), 0)
      << read(dir_ / "stderr.txt");
  EXPECT_TRUE(fs::exists(dir_ / "f" / "trajectory.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "f" / "snapshot_0000.txt"));
  EXPECT_TRUE(fs::exists(dir_ / "f" / "snapshot_0002.txt"));
}

TEST_F(CliTest, ConfigProblemsExitWithTwo) {
  const fs::path delta = write("delta.ini",
                               "[grid]\nN = 1\nh = 0.1\n[experiment]\nperturbation = sublinear\n"
                               "delta = 1.5\n");
  EXPECT_EQ(run("rescaled --config " + delta.string()), 2);
  EXPECT_NE(read(dir_ / "stderr.txt").find("line 6, key experiment.delta"), std::string::npos);

  const fs::path cfl = write("cfl.ini", "[grid]\nN = 1\nh = 0.1\n[flow]\ncfl_factor = 0.9\n");
  EXPECT_EQ(run("run --config " + cfl.string()), 2);

  const fs::path unknown = write("unknown.ini", "[grid]\nN = 1\nh = 0.1\nfoo = 1\n");
  EXPECT_EQ(run("run --config " + unknown.string()), 2);

  EXPECT_EQ(run("run --config " + (dir_ / "missing.ini").string()), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("run --override experiment.id=wulff"), 2);
}

TEST_F(CliTest, FailedCheckExitsWithFour) {
  EXPECT_EQ(run("oracle --out " + (dir_ / "g").string() +
                " --override experiment.threshold=1e-12 --override grid.h=0.05"),
            4);
  EXPECT_NE(read(dir_ / "g" / "grim_reaper_summary.txt").find("FAIL"), std::string::npos);
}

TEST_F(CliTest, NonConvergenceExitsWithThree) {
  EXPECT_EQ(run("expander --out " + (dir_ / "e").string() +
                " --override grid.h=0.1 --override grid.half_width=4 --override flow.end_time=0.5"),
            3);
}
