#pragma once

// Market prices, production costs and pumping energy cost, all with
// optional exponential time trends, plus the log-domain trend fitter used
// to derive those time constants from historical series.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace gwnash::econ {

/// exp(t / time_constant), or 1 when the series is flat (no time constant).
double trend_factor(const std::optional<double>& time_constant, int t);

struct CropMarket {
  double p0_init = 0.0;    // price with no supply at t = 0, $/bushel
  double pinf_init = 0.0;  // saturated price at t = 0, $/bushel
  double qbar = 1.0;       // supply scale, bushels; +inf makes price supply-independent
  std::optional<double> tau;  // trend time constant, years; nullopt = flat
  bool operator==(const CropMarket&) const = default;
};

struct MarketParams {
  std::vector<CropMarket> crops;
  void validate() const;
  bool operator==(const MarketParams&) const = default;
};

struct CropCost {
  double c0_init = 0.0;    // $/m² at zero area, t = 0
  double cinf_init = 0.0;  // $/m² at large area, t = 0
  double abar = 1.0;       // area scale, m²
  std::optional<double> theta;  // trend time constant, years; nullopt = flat
  bool operator==(const CropCost&) const = default;
};

struct CostParams {
  std::vector<CropCost> crops;
  void validate() const;
  bool operator==(const CostParams&) const = default;
};

struct EnergyParams {
  double gas_per_lift = 0.0;     // gas units to lift 1 m³ by 1 m
  double pump_efficiency = 1.0;  // (0, 1]
  double gauge_pressure_psi = 0.0;
  double gas_price_init = 0.0;      // $/gas unit at t = 0
  std::optional<double> zeta;       // gas trend time constant, years; nullopt = flat
  std::vector<double> surface_elevation;  // per-agent pumping reference level, m
  void validate() const;
  bool operator==(const EnergyParams&) const = default;
};

/// p = p_inf(t) + (p0(t) - p_inf(t)) * exp(-total_supply / qbar).
double crop_price(const MarketParams& params, std::size_t crop, int t, double total_supply);

/// c = c_inf(t) + (c0(t) - c_inf(t)) * exp(-irrigated_area / abar), $/m².
/// Saturation is per agent: `irrigated_area` is one agent's A_i * x_k.
double production_cost_rate(const CostParams& params, std::size_t crop, int t,
                            double irrigated_area);

/// g(t) = g(0) * exp(t / zeta).
double gas_price(const EnergyParams& params, int t);

struct PumpingCost {
  double per_m3 = 0.0;
  bool negative_lift = false;  // lift plus pressure head was negative; cost floored at 0
};

/// Gas-engine pumping cost per m³:
///   (theta / rho) * g(t) * (lift + 2.31 * psi * 0.3048)
/// with lift = surface_elevation[agent] - head, all in metres.
PumpingCost pumping_unit_cost(const EnergyParams& params, std::size_t agent, int t, double head);

struct TrendPoint {
  double t = 0.0;
  double value = 0.0;
};

struct ExponentialTrend {
  double init_value = 0.0;  // v0
  double rate = 0.0;        // 1 / tau; 0 for a constant series

  /// tau, or nullopt for a constant series.
  std::optional<double> time_constant() const;
  double at(double t) const;
};

/// Least squares on ln v = ln v0 + rate * t. Needs >= 2 points with
/// distinct times and strictly positive values.
ExponentialTrend fit_exponential_trend(std::span<const TrendPoint> series);

}  // namespace gwnash::econ
