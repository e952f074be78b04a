#pragma once

// Named scenarios: transforms applied to the base weather series and
// economic parameters before everything is resolved into per-year
// simulation inputs.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gwnash/agronomy.hpp"
#include "gwnash/econ.hpp"
#include "gwnash/hydro.hpp"
#include "gwnash/sim.hpp"

namespace gwnash::scenarios {

enum class TrendMode { kFlat, kTrended };

std::string_view to_string(TrendMode m);
TrendMode trend_mode_from_string(std::string_view s);

/// Growth applied to a trended series that has no fitted time constant.
inline constexpr double kDefaultAnnualGrowth = 0.02;

struct ScenarioSpec {
  std::string name = "baseline";
  double precip_summer_multiplier = 1.0;
  double precip_winter_multiplier = 1.0;
  double solar_summer_multiplier = 1.0;
  double solar_winter_multiplier = 1.0;
  TrendMode price_mode = TrendMode::kFlat;
  TrendMode gas_mode = TrendMode::kFlat;
  TrendMode cost_mode = TrendMode::kFlat;
  double ir_efficiency_rate = 0.0;  // IR_k(t) scaled by (1 - rate)^t
  std::vector<double> lema_fractions;  // empty: no LEMA runs
  int horizon = 20;

  void validate() const;
  bool operator==(const ScenarioSpec&) const = default;
};

/// Model parameters before any scenario is applied. Time constants in
/// `market`, `costs` and `energy` hold fitted trends (nullopt when none
/// was fitted); the scenario decides whether they are used.
struct BaseModel {
  std::vector<std::string> crop_names;
  std::vector<double> areas;  // m²
  hydro::FlowNetwork network;
  hydro::HydroParams hydro;
  agronomy::SurrogateModel surrogate;
  econ::MarketParams market;
  econ::CostParams costs;
  econ::EnergyParams energy;
  double discount = 1.0;

  bool operator==(const BaseModel&) const = default;
};

struct SurrogateDiagnostics {
  std::size_t clamped = 0;
  std::size_t out_of_domain = 0;
};

/// Seasonal multipliers; the annual total moves by the seasonal changes.
agronomy::WeatherYear transform_weather(const agronomy::WeatherYear& w, const ScenarioSpec& spec);

/// Resolves Omega: transformed weather, surrogate responses per year and
/// crop, IR efficiency decay, replenishment, and trend modes. Uses the
/// first `spec.horizon` years of `weather`.
sim::ScenarioInputs apply_scenario(std::span<const agronomy::WeatherYear> weather,
                                   const BaseModel& base, const ScenarioSpec& spec,
                                   SurrogateDiagnostics* diagnostics = nullptr);

/// baseline, wet, dry, population_growth, water_efficiency, lema_sweep.
std::vector<ScenarioSpec> builtin_scenarios();
/// Throws InvalidInput listing the known names when `name` is unknown.
ScenarioSpec builtin_scenario(std::string_view name);

}  // namespace gwnash::scenarios
