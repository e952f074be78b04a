#pragma once

// Run orchestration behind the command-line tool: solve, simulate, LEMA
// sweeps, report re-rendering and the two fitting utilities. Each run_*
// function writes its files and returns a process exit code.

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gwnash/config.hpp"
#include "gwnash/game.hpp"
#include "gwnash/results.hpp"
#include "gwnash/scenarios.hpp"
#include "gwnash/sim.hpp"

namespace gwnash::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitNotConverged = 2;

struct SolveOutcome {
  sim::ScenarioInputs inputs;
  scenarios::SurrogateDiagnostics surrogate;
  sim::JointStrategy strategy;
  sim::SimulationResult result;
  game::EquilibriumReport equilibrium;
  game::EquilibriumReport certification;
};

/// Resolves the configured scenario into simulation inputs.
sim::ScenarioInputs resolve_inputs(const io::RunConfig& cfg,
                                   scenarios::SurrogateDiagnostics* diagnostics = nullptr);

/// Relaxation, certification and a final simulation, without file output.
SolveOutcome solve(const io::RunConfig& cfg, const game::LemaConstraint* lema = nullptr,
                   const std::optional<sim::JointStrategy>& init = std::nullopt);

/// Output directory of a run: cfg.output_dir, or ./out/<scenario name> when unset.
std::filesystem::path output_dir(const io::RunConfig& cfg);

int run_solve(const io::RunConfig& cfg, std::ostream& log, const std::string& command = "solve");

/// Simulates cfg.strategy_csv without any optimization.
int run_simulate(const io::RunConfig& cfg, std::ostream& log);

struct SweepPoint {
  double fraction = 1.0;
  double aggregate_utility = 0.0;
  std::vector<double> utilities;
  bool converged = false;
  bool feasible = false;
  double max_relative_violation = 0.0;  // max over agents, windows of W/L - 1 (<= 0 when within cap)
};

struct SweepOutcome {
  SolveOutcome baseline;
  std::vector<SweepPoint> points;
  bool upward_trend_to_080 = false;  // soft check, see trend_to_080()
};

/// Least-squares slope of aggregate utility against cap fraction over the
/// baseline (fraction 1) and every fraction >= 0.80 is negative: utility
/// rises as the cap tightens to 0.80.
bool trend_to_080(double baseline_aggregate, const std::vector<SweepPoint>& points);

/// Fractions come from the scenario, or the builtin LEMA list when it has
/// none. Layout: baseline/, lema_<f>/ per fraction, sweep.csv,
/// lema_utility.svg and report.json.
int run_lema_sweep(const io::RunConfig& cfg, std::ostream& log);

/// Re-simulates the run stored in `dir` (report.json + strategies.csv),
/// re-renders its plots into `out` (default: `dir`) and prints a summary.
int run_report(const std::filesystem::path& dir, const std::optional<std::filesystem::path>& out,
               std::ostream& log);

/// Fits every crop in a training table and writes the surrogate CSV.
int run_fit_surrogate(const std::filesystem::path& training, const std::filesystem::path& model_out,
                      std::ostream& log);

struct TrendInputs {
  std::map<std::string, std::filesystem::path> prices;  // crop name -> year,value CSV
  std::map<std::string, std::filesystem::path> costs;
  std::optional<std::filesystem::path> gas;
};

/// Fits exponential trends to the given histories, stores their time
/// constants in a copy of the configuration and writes it to `config_out`.
int run_fit_trends(const io::RunConfig& cfg, const TrendInputs& inputs,
                   const std::filesystem::path& config_out, std::ostream& log);

}  // namespace gwnash::app
