#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "fixtures.hpp"

namespace fs = std::filesystem;
using gwnash::testing::TempDir;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

// Runs the CLI with stdout and stderr captured into `log`; returns its exit code.
int cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("'") + GWNASH_CLI_PATH + "' " + args + " >" + quote(log) + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path small_config() { return gwnash::testing::fixture_dir() / "small_game" / "config.json"; }

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  TempDir dir("cli_usage");
  const auto log = dir.path() / "log.txt";
  EXPECT_EQ(cli("--help", log), 0);
  EXPECT_NE(slurp(log).find("lema-sweep"), std::string::npos);
  EXPECT_EQ(cli("", log), 1);
  EXPECT_EQ(cli("frobnicate", log), 1);
  EXPECT_EQ(cli("solve", log), 1);
  EXPECT_NE(slurp(log).find("--config"), std::string::npos);
}

TEST(Cli, InvalidConfigExitsOne) {
  TempDir dir("cli_invalid");
  const auto log = dir.path() / "log.txt";
  EXPECT_EQ(cli("solve --config " + quote(dir.path() / "missing.json"), log), 1);

  std::string text = slurp(small_config());
  text.replace(text.find("\"seed\""), 6, "\"sead\"");
  std::ofstream(dir.path() / "bad.json") << text;
  fs::copy_file(small_config().parent_path() / "weather.csv", dir.path() / "weather.csv");
  fs::copy_file(small_config().parent_path() / "surrogate.csv", dir.path() / "surrogate.csv");
  EXPECT_EQ(cli("solve --config " + quote(dir.path() / "bad.json"), log), 1);
  EXPECT_NE(slurp(log).find("sead"), std::string::npos) << slurp(log);

  EXPECT_EQ(cli("--config " + quote(small_config()) + " --eta 1.5 solve", log), 1);
}

TEST(Cli, SolveSimulateReportOnSmallGame) {
  TempDir dir("cli_solve");
  const auto log = dir.path() / "log.txt";
  const auto out = dir.path() / "solve";
  ASSERT_EQ(cli("--config " + quote(small_config()) + " --out " + quote(out) + " solve", log), 0) << slurp(log);
  for (const char* f : {"strategies.csv", "panel.csv", "heads.csv", "report.json", "strategies.svg",
                        "utilities.svg", "heads.svg", "pumped_vs_utility.svg"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }

  const auto sim_out = dir.path() / "simulate";
  ASSERT_EQ(cli("--config " + quote(small_config()) + " --out " + quote(sim_out) + " simulate --strategy " +
                    quote(out / "strategies.csv"),
                log),
            0)
      << slurp(log);
  EXPECT_EQ(slurp(sim_out / "panel.csv"), slurp(out / "panel.csv"));
  EXPECT_EQ(slurp(sim_out / "heads.csv"), slurp(out / "heads.csv"));

  EXPECT_EQ(cli("report " + quote(out) + " --out " + quote(dir.path() / "redraw"), log), 0) << slurp(log);
  EXPECT_EQ(slurp(dir.path() / "redraw" / "utilities.svg"), slurp(out / "utilities.svg"));

  EXPECT_EQ(cli("--config " + quote(small_config()) + " simulate", log), 1);
}

TEST(Cli, NonConvergenceExitsTwoAndStillWrites) {
  TempDir dir("cli_nonconv");
  const auto log = dir.path() / "log.txt";
  const auto out = dir.path() / "run";
  EXPECT_EQ(cli("--config " + quote(small_config()) + " --max-iters 1 --out " + quote(out) + " solve", log), 2)
      << slurp(log);
  EXPECT_TRUE(fs::exists(out / "report.json"));
  EXPECT_NE(slurp(out / "report.json").find("\"converged\": false"), std::string::npos);
}

TEST(Cli, FitSurrogateReproducesShippedModel) {
  TempDir dir("cli_fit");
  const auto log = dir.path() / "log.txt";
  const auto model = dir.path() / "model.csv";
  ASSERT_EQ(cli("fit-surrogate " + quote(gwnash::testing::data_dir() / "surrogate_training.csv") + " --model " +
                    quote(model),
                log),
            0)
      << slurp(log);
  EXPECT_EQ(slurp(model), slurp(gwnash::testing::data_dir() / "surrogate_default.csv"));
}

TEST(Cli, FitTrendsWritesTimeConstants) {
  TempDir dir("cli_trends");
  const auto log = dir.path() / "log.txt";
  std::ofstream(dir.path() / "corn.csv") << "year,value\n2000,2.0\n2001,2.1\n2002,2.2\n2003,2.3\n";
  std::ofstream(dir.path() / "gas.csv") << "year,value\n2000,5.0\n2001,5.0\n";
  ASSERT_EQ(cli("--config " + quote(small_config()) + " --out " + quote(dir.path()) + " fit-trends --price corn=" +
                    quote(dir.path() / "corn.csv") + " --gas " + quote(dir.path() / "gas.csv"),
                log),
            0)
      << slurp(log);
  const auto text = slurp(dir.path() / "config_trended.json");
  EXPECT_NE(text.find("\"tau_years\""), std::string::npos);
  EXPECT_EQ(cli("--config " + quote(small_config()) + " fit-trends --price rice=" + quote(dir.path() / "corn.csv"),
                log),
            1);
}
