#pragma once

// JSON run configuration. Loading applies every unit conversion (acres,
// feet, millimetres to SI), reads the referenced weather and surrogate
// files, and validates all nested invariants; unknown keys are rejected.
// Saving always writes SI keys, so load(save(c)) == c.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gwnash/agronomy.hpp"
#include "gwnash/game.hpp"
#include "gwnash/scenarios.hpp"

namespace gwnash::io {

struct RunConfig {
  scenarios::BaseModel model;
  std::filesystem::path weather_csv;    // absolute
  std::filesystem::path surrogate_csv;  // absolute
  std::vector<agronomy::WeatherYear> weather;
  scenarios::ScenarioSpec scenario;
  game::RelaxationConfig relaxation;  // relaxation.seed is the run seed
  game::VerifyOptions verify;
  std::filesystem::path output_dir;    // absolute; empty selects ./out
  std::filesystem::path strategy_csv;  // fixed strategy for `simulate`; may be empty

  bool operator==(const RunConfig&) const = default;
};

/// Reads a config file. A report.json written by a previous run is also
/// accepted; its embedded "config" object is used. Relative paths resolve
/// against the file's directory.
RunConfig load_config(const std::filesystem::path& path);

/// Parses config text; relative paths resolve against `base_dir`.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);

/// Canonical JSON text (SI keys, absolute paths, 2-space indent).
std::string config_to_json(const RunConfig& config);
void save_config(const RunConfig& config, const std::filesystem::path& path);

}  // namespace gwnash::io
