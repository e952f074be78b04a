#include "gwnash/scenarios.hpp"

#include <cmath>

#include "gwnash/error.hpp"
#include "gwnash/units.hpp"

namespace gwnash::scenarios {

namespace {

std::optional<double> resolve_trend(TrendMode mode, const std::optional<double>& fitted) {
  if (mode == TrendMode::kFlat) return std::nullopt;
  if (fitted) return fitted;
  return 1.0 / std::log1p(kDefaultAnnualGrowth);
}

}  // namespace

std::string_view to_string(TrendMode m) { return m == TrendMode::kFlat ? "flat" : "trended"; }

TrendMode trend_mode_from_string(std::string_view s) {
  if (s == "flat") return TrendMode::kFlat;
  if (s == "trended") return TrendMode::kTrended;
  throw InvalidInput("trend mode must be \"flat\" or \"trended\", got \"" + std::string(s) + "\"");
}

void ScenarioSpec::validate() const {
  const std::string where = "scenario '" + name + "': ";
  for (double m : {precip_summer_multiplier, precip_winter_multiplier, solar_summer_multiplier,
                   solar_winter_multiplier}) {
    if (!(m > 0.0) || !std::isfinite(m)) throw InvalidInput(where + "multipliers must be > 0");
  }
  if (!(ir_efficiency_rate >= 0.0 && ir_efficiency_rate < 1.0)) {
    throw InvalidInput(where + "ir_efficiency_rate must lie in [0, 1)");
  }
  for (double f : lema_fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw InvalidInput(where + "lema fractions must lie in (0, 1]");
  }
  if (horizon < 1) throw InvalidInput(where + "horizon must be >= 1");
}

agronomy::WeatherYear transform_weather(const agronomy::WeatherYear& w, const ScenarioSpec& spec) {
  agronomy::WeatherYear out = w;
  out.precip_summer = w.precip_summer * spec.precip_summer_multiplier;
  out.precip_winter = w.precip_winter * spec.precip_winter_multiplier;
  if (spec.precip_summer_multiplier != 1.0 || spec.precip_winter_multiplier != 1.0) {
    out.precip_annual = w.precip_annual + (out.precip_summer - w.precip_summer) +
                        (out.precip_winter - w.precip_winter);
  }
  out.solar_summer = w.solar_summer * spec.solar_summer_multiplier;
  out.solar_winter = w.solar_winter * spec.solar_winter_multiplier;
  return out;
}

sim::ScenarioInputs apply_scenario(std::span<const agronomy::WeatherYear> weather,
                                   const BaseModel& base, const ScenarioSpec& spec,
                                   SurrogateDiagnostics* diagnostics) {
  spec.validate();
  const auto years = static_cast<std::size_t>(spec.horizon);
  if (weather.size() < years) {
    throw InvalidInput("scenario '" + spec.name + "' needs " + std::to_string(years) +
                       " weather years, series has " + std::to_string(weather.size()));
  }
  const std::size_t nk = base.crop_names.size();
  std::vector<std::size_t> surrogate_index(nk);
  for (std::size_t k = 0; k < nk; ++k) surrogate_index[k] = base.surrogate.index_of(base.crop_names[k]);

  sim::ScenarioInputs in;
  in.horizon = spec.horizon;
  in.crop_names = base.crop_names;
  in.areas = base.areas;
  in.network = base.network;
  in.hydro = base.hydro;
  in.discount = base.discount;
  in.market = base.market;
  in.costs = base.costs;
  in.energy = base.energy;
  for (auto& c : in.market.crops) c.tau = resolve_trend(spec.price_mode, c.tau);
  for (auto& c : in.costs.crops) c.theta = resolve_trend(spec.cost_mode, c.theta);
  in.energy.zeta = resolve_trend(spec.gas_mode, in.energy.zeta);

  in.crop_responses.resize(years);
  in.replenishment.resize(years);
  for (std::size_t t = 0; t < years; ++t) {
    weather[t].validate();
    const agronomy::WeatherYear w = transform_weather(weather[t], spec);
    auto& row = in.crop_responses[t];
    row.resize(nk);
    for (std::size_t k = 0; k < nk; ++k) {
      const auto e = agronomy::evaluate_surrogate(base.surrogate, w, surrogate_index[k]);
      row[k] = e.response;
      if (diagnostics != nullptr) {
        diagnostics->clamped += e.clamped ? 1 : 0;
        diagnostics->out_of_domain += e.out_of_domain ? 1 : 0;
      }
      if (spec.ir_efficiency_rate != 0.0) {
        row[k].irrigation *= std::pow(1.0 - spec.ir_efficiency_rate, static_cast<double>(t + 1));
      }
    }
    const double evaporation_mm = agronomy::estimate_evaporation(row, w.precip_annual);
    in.replenishment[t] = hydro::net_replenishment(units::mm_to_m(w.precip_annual),
                                                   units::mm_to_m(evaporation_mm));
  }
  in.validate();
  return in;
}

std::vector<ScenarioSpec> builtin_scenarios() {
  std::vector<ScenarioSpec> out;

  ScenarioSpec baseline;
  baseline.name = "baseline";
  out.push_back(baseline);

  ScenarioSpec wet = baseline;
  wet.name = "wet";
  wet.precip_summer_multiplier = 1.20;
  wet.solar_summer_multiplier = 0.95;
  out.push_back(wet);

  ScenarioSpec dry = baseline;
  dry.name = "dry";
  dry.precip_summer_multiplier = 0.90;
  dry.precip_winter_multiplier = 0.90;
  dry.solar_summer_multiplier = 1.02;
  dry.solar_winter_multiplier = 1.02;
  out.push_back(dry);

  ScenarioSpec population = baseline;
  population.name = "population_growth";
  population.price_mode = TrendMode::kTrended;
  out.push_back(population);

  ScenarioSpec efficiency = baseline;
  efficiency.name = "water_efficiency";
  efficiency.ir_efficiency_rate = 0.02;
  out.push_back(efficiency);

  ScenarioSpec lema = baseline;
  lema.name = "lema_sweep";
  lema.lema_fractions = {0.95, 0.90, 0.85, 0.80, 0.75, 0.70};
  out.push_back(lema);

  return out;
}

ScenarioSpec builtin_scenario(std::string_view name) {
  std::string known;
  for (auto& s : builtin_scenarios()) {
    if (s.name == name) return s;
    known += (known.empty() ? "" : ", ") + s.name;
  }
  throw InvalidInput("unknown scenario '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace gwnash::scenarios
