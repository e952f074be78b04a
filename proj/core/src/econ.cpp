#include "gwnash/econ.hpp"

#include <cmath>
#include <string>

#include "gwnash/error.hpp"
#include "gwnash/units.hpp"

namespace gwnash::econ {

namespace {

void check_time_constant(const std::optional<double>& tc, const std::string& field) {
  if (tc && (!std::isfinite(*tc) || *tc == 0.0)) {
    throw InvalidInput(field + " must be a finite non-zero number of years or flat");
  }
}

}  // namespace

double trend_factor(const std::optional<double>& time_constant, int t) {
  if (!time_constant) return 1.0;
  return std::exp(static_cast<double>(t) / *time_constant);
}

void MarketParams::validate() const {
  for (std::size_t k = 0; k < crops.size(); ++k) {
    const auto& c = crops[k];
    const std::string where = "crops[" + std::to_string(k) + "].price.";
    if (!(c.pinf_init >= 0.0) || !std::isfinite(c.pinf_init)) throw InvalidInput(where + "pinf must be >= 0");
    if (!(c.p0_init >= c.pinf_init) || !std::isfinite(c.p0_init)) throw InvalidInput(where + "p0 must be >= pinf");
    if (!(c.qbar > 0.0)) throw InvalidInput(where + "qbar must be > 0");
    check_time_constant(c.tau, where + "tau");
  }
}

void CostParams::validate() const {
  for (std::size_t k = 0; k < crops.size(); ++k) {
    const auto& c = crops[k];
    const std::string where = "crops[" + std::to_string(k) + "].cost.";
    if (!(c.cinf_init >= 0.0) || !std::isfinite(c.cinf_init)) throw InvalidInput(where + "cinf must be >= 0");
    if (!(c.c0_init >= c.cinf_init) || !std::isfinite(c.c0_init)) throw InvalidInput(where + "c0 must be >= cinf");
    if (!(c.abar > 0.0)) throw InvalidInput(where + "abar must be > 0");
    check_time_constant(c.theta, where + "theta");
  }
}

void EnergyParams::validate() const {
  if (!(gas_per_lift > 0.0) || !std::isfinite(gas_per_lift)) throw InvalidInput("energy.gas_per_lift must be > 0");
  if (!(pump_efficiency > 0.0 && pump_efficiency <= 1.0)) {
    throw InvalidInput("energy.pump_efficiency must lie in (0, 1]");
  }
  if (!(gauge_pressure_psi >= 0.0) || !std::isfinite(gauge_pressure_psi)) throw InvalidInput("energy.gauge_pressure_psi must be >= 0");
  if (!(gas_price_init > 0.0) || !std::isfinite(gas_price_init)) throw InvalidInput("energy.gas_price must be > 0");
  check_time_constant(zeta, "energy.zeta");
  for (double e : surface_elevation) {
    if (!std::isfinite(e)) throw InvalidInput("agents[].surface_elevation must be finite");
  }
}

double crop_price(const MarketParams& params, std::size_t crop, int t, double total_supply) {
  if (crop >= params.crops.size()) throw InvalidInput("crop_price: unknown crop " + std::to_string(crop));
  if (!(total_supply >= 0.0)) throw InvalidInput("crop_price: total supply must be >= 0");
  const CropMarket& m = params.crops[crop];
  const double f = trend_factor(m.tau, t);
  const double p0 = m.p0_init * f;
  const double pinf = m.pinf_init * f;
  return pinf + (p0 - pinf) * std::exp(-total_supply / m.qbar);
}

double production_cost_rate(const CostParams& params, std::size_t crop, int t,
                            double irrigated_area) {
  if (crop >= params.crops.size()) {
    throw InvalidInput("production_cost_rate: unknown crop " + std::to_string(crop));
  }
  if (!(irrigated_area >= 0.0)) throw InvalidInput("production_cost_rate: area must be >= 0");
  const CropCost& c = params.crops[crop];
  const double f = trend_factor(c.theta, t);
  const double c0 = c.c0_init * f;
  const double cinf = c.cinf_init * f;
  return cinf + (c0 - cinf) * std::exp(-irrigated_area / c.abar);
}

double gas_price(const EnergyParams& params, int t) {
  return params.gas_price_init * trend_factor(params.zeta, t);
}

PumpingCost pumping_unit_cost(const EnergyParams& params, std::size_t agent, int t, double head) {
  if (agent >= params.surface_elevation.size()) {
    throw InvalidInput("pumping_unit_cost: no surface elevation for agent " + std::to_string(agent));
  }
  const double lift = params.surface_elevation[agent] - head;
  const double pressure_head =
      units::feet_to_m(units::kFeetHeadPerPsi * params.gauge_pressure_psi);
  const double total_head = lift + pressure_head;
  PumpingCost out;
  if (total_head < 0.0) {
    out.negative_lift = true;
    return out;
  }
  out.per_m3 = params.gas_per_lift / params.pump_efficiency * gas_price(params, t) * total_head;
  return out;
}

std::optional<double> ExponentialTrend::time_constant() const {
  if (rate == 0.0) return std::nullopt;
  return 1.0 / rate;
}

double ExponentialTrend::at(double t) const { return init_value * std::exp(rate * t); }

ExponentialTrend fit_exponential_trend(std::span<const TrendPoint> series) {
  if (series.size() < 2) throw InvalidInput("fit_exponential_trend: need at least 2 points");
  bool constant = true;
  for (const auto& p : series) {
    if (!std::isfinite(p.t) || !std::isfinite(p.value)) {
      throw InvalidInput("fit_exponential_trend: non-finite point");
    }
    if (!(p.value > 0.0)) throw InvalidInput("fit_exponential_trend: values must be > 0");
    if (p.value != series.front().value) constant = false;
  }
  if (constant) return {series.front().value, 0.0};

  const double n = static_cast<double>(series.size());
  double t_mean = 0.0;
  double y_mean = 0.0;
  for (const auto& p : series) {
    t_mean += p.t;
    y_mean += std::log(p.value);
  }
  t_mean /= n;
  y_mean /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& p : series) {
    const double dt = p.t - t_mean;
    sxy += dt * (std::log(p.value) - y_mean);
    sxx += dt * dt;
  }
  if (sxx == 0.0) throw InvalidInput("fit_exponential_trend: all points share one time");
  const double rate = sxy / sxx;
  return {std::exp(y_mean - rate * t_mean), rate};
}

}  // namespace gwnash::econ
