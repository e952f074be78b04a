#pragma once

// Result files of one run: strategies.csv, panel.csv, heads.csv and
// report.json. Everything is written with fixed ordering and 17-digit
// numbers so re-running from report.json reproduces the files byte for byte.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gwnash/config.hpp"
#include "gwnash/game.hpp"
#include "gwnash/scenarios.hpp"
#include "gwnash/sim.hpp"

namespace gwnash::io {

struct LemaRecord {
  double fraction = 1.0;
  std::vector<std::vector<std::size_t>> windows;  // 0-based years
  std::vector<std::vector<double>> limits;         // [agent][window], m³
};

/// Everything report.json records besides the raw tables.
struct RunRecord {
  std::string command;  // solve, simulate, lema-sweep, scenario
  RunConfig config;
  std::optional<game::EquilibriumReport> equilibrium;    // relaxation outcome
  std::optional<game::EquilibriumReport> certification;  // verify_equilibrium outcome
  std::optional<LemaRecord> lema;
  scenarios::SurrogateDiagnostics surrogate;
};

/// agent,year,revenue,extraction_cost,production_cost,net,pumped_m3 with
/// 1-based indices, year-major (all agents of year 1 first).
void write_panel_csv(const std::filesystem::path& path, const sim::SimulationResult& result);

/// year,boundary,agent_1..agent_N for years 0..T (0 = initial state).
void write_heads_csv(const std::filesystem::path& path, const sim::SimulationResult& result);

std::string report_to_json(const RunRecord& record, const sim::SimulationResult& result);

/// Creates `dir` if needed and writes the four result files.
void write_results(const std::filesystem::path& dir, const sim::JointStrategy& strategy,
                   const sim::SimulationResult& result, const RunRecord& record);

/// Fields of a previously written report.json needed to rebuild a run.
struct StoredReport {
  std::string command;
  RunConfig config;
  std::optional<double> lema_fraction;
  std::vector<double> utilities;
};

StoredReport load_report(const std::filesystem::path& path);

}  // namespace gwnash::io
