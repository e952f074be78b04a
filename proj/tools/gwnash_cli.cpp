// gwnash: equilibrium irrigation strategies, simulations and scenario
// sweeps from a JSON configuration. Exit codes: 0 success, 1 invalid input
// or I/O failure, 2 solver did not converge (results are still written).

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gwnash/app.hpp"
#include "gwnash/config.hpp"
#include "gwnash/error.hpp"
#include "gwnash/scenarios.hpp"

namespace fs = std::filesystem;
using namespace gwnash;

namespace {

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> eta;
  std::optional<double> epsilon;
  std::optional<int> max_iters;
  std::optional<int> threads;
  std::optional<std::string> out;
  std::optional<double> discount;
  bool quiet = false;
};

io::RunConfig load_with_overrides(const GlobalFlags& g) {
  if (g.config.empty()) throw InvalidInput("--config PATH is required for this command");
  io::RunConfig cfg = io::load_config(g.config);
  if (g.seed) cfg.relaxation.seed = *g.seed;
  if (g.eta) cfg.relaxation.eta = *g.eta;
  if (g.epsilon) cfg.relaxation.epsilon = *g.epsilon;
  if (g.max_iters) cfg.relaxation.max_iters = *g.max_iters;
  if (g.threads) cfg.relaxation.threads = *g.threads;
  if (g.discount) cfg.model.discount = *g.discount;
  if (g.out) cfg.output_dir = fs::absolute(*g.out).lexically_normal();
  cfg.relaxation.validate();
  if (!(cfg.model.discount > 0.0 && cfg.model.discount <= 1.0)) {
    throw InvalidInput("--discount must lie in (0, 1]");
  }
  return cfg;
}

// "corn=path/to/file.csv" pairs.
std::map<std::string, fs::path> parse_pairs(const std::vector<std::string>& items,
                                            const std::string& flag) {
  std::map<std::string, fs::path> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw InvalidInput(flag + " expects CROP=PATH, got '" + item + "'");
    }
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Nash-equilibrium irrigation strategies for coupled groundwater users"};
  cli.require_subcommand(1);
  cli.fallthrough();

  GlobalFlags g;
  cli.add_option("--config", g.config, "JSON configuration (or a report.json from a previous run)");
  cli.add_option("--seed", g.seed, "random seed for the initial strategy");
  cli.add_option("--eta", g.eta, "relaxation step in (0, 1)");
  cli.add_option("--epsilon", g.epsilon, "stopping threshold on ||z(x) - x||_inf");
  cli.add_option("--max-iters", g.max_iters, "maximum relaxation iterations");
  cli.add_option("--threads", g.threads, "worker threads for best responses");
  cli.add_option("--out", g.out, "output directory");
  cli.add_option("--discount", g.discount, "yearly discount factor in (0, 1]");
  cli.add_flag("--quiet,-q", g.quiet, "suppress progress output");

  auto* fit_surrogate = cli.add_subcommand("fit-surrogate", "fit the quadratic crop surrogate to a training table");
  std::string training;
  std::string model_out;
  fit_surrogate->add_option("training", training, "training CSV")->required()->check(CLI::ExistingFile);
  fit_surrogate->add_option("--model", model_out, "output model CSV (default: <out>/surrogate.csv)");

  auto* fit_trends = cli.add_subcommand("fit-trends", "fit exponential trends to price, cost and gas histories");
  std::vector<std::string> price_files, cost_files;
  std::string gas_file;
  fit_trends->add_option("--price", price_files, "CROP=year,value CSV of prices")->take_all();
  fit_trends->add_option("--cost", cost_files, "CROP=year,value CSV of production costs")->take_all();
  fit_trends->add_option("--gas", gas_file, "year,value CSV of gas prices");

  auto* simulate = cli.add_subcommand("simulate", "simulate a fixed strategy");
  std::string strategy_file;
  simulate->add_option("--strategy", strategy_file, "strategy CSV (agent,crop,year,x)");

  cli.add_subcommand("solve", "compute and certify a Nash equilibrium");

  auto* scenario = cli.add_subcommand("scenario", "solve a named builtin scenario");
  std::string scenario_name;
  scenario->add_option("name", scenario_name, "baseline, wet, dry, population_growth, water_efficiency or lema_sweep")
      ->required();

  auto* sweep = cli.add_subcommand("lema-sweep", "equilibria under a range of LEMA pumping caps");
  std::vector<double> fractions;
  sweep->add_option("--fractions", fractions, "cap fractions of baseline pumping")->take_all();

  auto* report = cli.add_subcommand("report", "re-simulate a result directory and redraw its plots");
  std::string report_dir;
  report->add_option("dir", report_dir, "result directory")->required()->check(CLI::ExistingDirectory);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? app::kExitOk : app::kExitInvalid;
  }

  std::ostream quiet_sink(nullptr);
  std::ostream& log = g.quiet ? quiet_sink : std::cout;

  try {
    if (fit_surrogate->parsed()) {
      fs::path target = model_out.empty() ? fs::path(g.out.value_or(".")) / "surrogate.csv" : fs::path(model_out);
      return app::run_fit_surrogate(training, target, log);
    }
    if (report->parsed()) {
      std::optional<fs::path> out;
      if (g.out) out = fs::path(*g.out);
      return app::run_report(report_dir, out, log);
    }

    io::RunConfig cfg = load_with_overrides(g);
    if (fit_trends->parsed()) {
      app::TrendInputs in;
      in.prices = parse_pairs(price_files, "--price");
      in.costs = parse_pairs(cost_files, "--cost");
      if (!gas_file.empty()) in.gas = fs::path(gas_file);
      if (in.prices.empty() && in.costs.empty() && !in.gas) {
        throw InvalidInput("fit-trends needs at least one of --price, --cost, --gas");
      }
      const fs::path target = fs::path(g.out.value_or(".")) / "config_trended.json";
      return app::run_fit_trends(cfg, in, target, log);
    }
    if (simulate->parsed()) {
      if (!strategy_file.empty()) cfg.strategy_csv = fs::absolute(strategy_file).lexically_normal();
      return app::run_simulate(cfg, log);
    }
    if (scenario->parsed()) {
      const int horizon = cfg.scenario.horizon;
      cfg.scenario = scenarios::builtin_scenario(scenario_name);
      cfg.scenario.horizon = horizon;
      if (!g.out) cfg.output_dir.clear();
      if (!cfg.scenario.lema_fractions.empty()) return app::run_lema_sweep(cfg, log);
      return app::run_solve(cfg, log);
    }
    if (sweep->parsed()) {
      if (!fractions.empty()) cfg.scenario.lema_fractions = fractions;
      cfg.scenario.validate();
      return app::run_lema_sweep(cfg, log);
    }
    return app::run_solve(cfg, log);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return app::kExitInvalid;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return app::kExitInvalid;
  }
}
