#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "posifract/io.hpp"

namespace fs = std::filesystem;
using posifract::Json;

namespace {

std::string spec(const std::string& name) {
  return std::string(POSIFRACT_SPEC_DIR) + "/" + name + ".json";
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("posifract_cli_" + std::string(info->name()) + "_" +
                                        std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  /// Runs the binary with stderr captured to dir/stderr.txt; returns the exit code.
  int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + POSIFRACT_CLI + " " + args + " > " +
                            (dir_ / "stdout.txt").string() + " 2> " +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, FitWritesOutputs) {
  const fs::path out = dir_ / "fit";
  ASSERT_EQ(run("fit --config " + spec("quadratic_two_pieces") + " --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "fstar.csv"));
  const Json report = Json::parse(read(out / "report.json"));
  EXPECT_EQ(report["metric"], "sup");
  EXPECT_LE(report["interpolation_error"].get<double>(), 1e-8);
  EXPECT_FALSE(report["history"].empty());
  EXPECT_EQ(Json::parse(read(out / "validation.json"))["passed"], true);
}

TEST_F(Cli, FitIsDeterministic) {
  const std::string cfg = spec("quadratic_small_scaling");
  ASSERT_EQ(run("fit --config " + cfg + " --out " + (dir_ / "a").string()), 0);
  ASSERT_EQ(run("fit --config " + cfg + " --out " + (dir_ / "b").string()), 0);
  for (const char* name : {"fstar.csv", "report.json", "validation.json"}) {
    EXPECT_EQ(read(dir_ / "a" / name), read(dir_ / "b" / name)) << name;
  }
}

TEST_F(Cli, ZeroScalingReproducesGerm) {
  ASSERT_EQ(run("fit --config " + spec("germ_fixed_zero_scaling") + " --out " + dir_.string()), 0);
  std::istringstream csv(read(dir_ / "fstar.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "x,value");
  const auto germ = posifract::build_spec(posifract::load_config(spec("germ_fixed_zero_scaling")))
                        .c_form()
                        ->germ;
  std::size_t k = 0;
  while (std::getline(csv, line)) {
    const double v = std::stod(line.substr(line.find(',') + 1));
    EXPECT_EQ(v, germ[k]) << "sample " << k;
    ++k;
  }
  EXPECT_EQ(k, germ.size());
}

TEST_F(Cli, PositivityCounterexampleExitsTwo) {
  EXPECT_EQ(run("fit --config " + spec("positivity_counterexample") + " --out " + dir_.string()), 2);
  const std::string err = read(dir_ / "stderr.txt");
  EXPECT_NE(err.find("q_nonnegative"), std::string::npos);
  EXPECT_EQ(Json::parse(err)["error"], "validation");
  EXPECT_FALSE(fs::exists(dir_ / "fstar.csv"));
}

TEST_F(Cli, NonConvergenceExitsThree) {
  EXPECT_EQ(run("fit --config " + spec("quadratic_two_pieces") + " --max-iter 2 --tol 1e-15 --out " +
                dir_.string()),
            3);
  EXPECT_EQ(Json::parse(read(dir_ / "stderr.txt"))["error"], "non_convergence");
}

TEST_F(Cli, AttractorWithinBound) {
  ASSERT_EQ(run("attractor --config " + spec("quadratic_two_pieces") + " --k 20 --out " +
                dir_.string()),
            0);
  const Json eq = Json::parse(read(dir_ / "equivalence.json"));
  EXPECT_EQ(eq["within_bound"], true);
  EXPECT_EQ(eq["k"], 20);
  EXPECT_TRUE(fs::exists(dir_ / "attractor.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "ifs.json"));
}

TEST_F(Cli, AttractorZeroIterationsExitsTwo) {
  EXPECT_EQ(run("attractor --config " + spec("quadratic_two_pieces") + " --k 0 --out " +
                dir_.string()),
            2);
  EXPECT_EQ(Json::parse(read(dir_ / "stderr.txt"))["error"], "parameter");
}

TEST_F(Cli, ChaosGameOutput) {
  ASSERT_EQ(run("attractor --config " + spec("diagonal_ifs") + " --chaos-game 500 --out " +
                dir_.string()),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "chaos.csv"));
}

TEST_F(Cli, EnvironmentOverridesOut) {
  const fs::path env_dir = dir_ / "from_env";
  ASSERT_EQ(run("fit --config " + spec("quadratic_two_pieces") + " --out " + (dir_ / "flag").string(),
                "POSIFRACT_OUT=" + env_dir.string()),
            0);
  EXPECT_TRUE(fs::exists(env_dir / "fstar.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "flag"));
}

TEST_F(Cli, UsageErrorsExitFour) {
  EXPECT_EQ(run("verify --suite nonsense --out " + dir_.string()), 4);
  EXPECT_NE(read(dir_ / "stderr.txt").find("metrics"), std::string::npos);
  EXPECT_EQ(run("verify --out " + dir_.string()), 4);
  EXPECT_EQ(run("bogus"), 4);
  EXPECT_EQ(run(""), 4);
  EXPECT_EQ(run("fit --grid notanumber"), 4);
}

TEST_F(Cli, MissingConfigIsConfigurationError) {
  EXPECT_EQ(run("fit --config /nonexistent.json --out " + dir_.string()), 2);
  EXPECT_EQ(Json::parse(read(dir_ / "stderr.txt"))["error"], "configuration");
}

TEST_F(Cli, VerifyMetricsSuite) {
  ASSERT_EQ(run("verify --suite metrics --out " + dir_.string()), 0);
  const Json r = Json::parse(read(dir_ / "verify_metrics.json"));
  EXPECT_FALSE(r.empty());
}

TEST_F(Cli, HelpExitsZero) { EXPECT_EQ(run("--help"), 0); }
