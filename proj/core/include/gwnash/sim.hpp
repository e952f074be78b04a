#pragma once

// Forward multi-year simulation of the irrigation economy. Given every
// agent's land-use fractions and the fully resolved scenario inputs it
// produces revenues, costs, pumped volumes, head trajectories and the
// per-agent utilities that the game layer optimizes.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gwnash/agronomy.hpp"
#include "gwnash/econ.hpp"
#include "gwnash/hydro.hpp"

namespace gwnash::sim {

/// Land fractions x[i][k][t] (agent, crop, 0-based year index), stored
/// agent-major so one agent's K*T block is contiguous. Crops 0 and 1 are
/// the two summer crops sharing the summer land; crops >= 2 are
/// independent (winter wheat in the shipped setup).
class JointStrategy {
 public:
  JointStrategy() = default;
  JointStrategy(std::size_t agents, std::size_t crops, std::size_t years, double fill = 0.0);

  std::size_t num_agents() const { return agents_; }
  std::size_t num_crops() const { return crops_; }
  std::size_t num_years() const { return years_; }
  std::size_t block_size() const { return crops_ * years_; }

  double& at(std::size_t i, std::size_t k, std::size_t t) { return x_[index(i, k, t)]; }
  double at(std::size_t i, std::size_t k, std::size_t t) const { return x_[index(i, k, t)]; }

  std::span<double> block(std::size_t i) { return {x_.data() + i * block_size(), block_size()}; }
  std::span<const double> block(std::size_t i) const {
    return {x_.data() + i * block_size(), block_size()};
  }
  std::span<double> values() { return x_; }
  std::span<const double> values() const { return x_; }

  /// Throws InvalidInput naming the first entry that breaks 0 <= x <= 1 or
  /// x[i][0][t] + x[i][1][t] = 1 (within `tol`).
  void validate(double tol = 1e-9) const;
  bool is_feasible(double tol = 1e-9) const;

  /// Sup-norm distance; shapes must match.
  double max_abs_diff(const JointStrategy& other) const;

  bool operator==(const JointStrategy&) const = default;

 private:
  std::size_t index(std::size_t i, std::size_t k, std::size_t t) const {
    return (i * crops_ + k) * years_ + t;
  }

  std::size_t agents_ = 0;
  std::size_t crops_ = 0;
  std::size_t years_ = 0;
  std::vector<double> x_;
};

/// Everything the simulation needs, already resolved per year (the Omega
/// of the utility function). Year index t in vectors is 0-based; trend
/// formulas receive the model year t + 1.
struct ScenarioInputs {
  int horizon = 0;
  std::vector<std::string> crop_names;
  std::vector<double> areas;  // A_i, m²
  hydro::FlowNetwork network;
  hydro::HydroParams hydro;
  std::vector<std::vector<agronomy::CropResponse>> crop_responses;  // [t][k], mm and bu/acre
  econ::MarketParams market;
  econ::CostParams costs;
  econ::EnergyParams energy;
  std::vector<double> replenishment;  // R(t), m/year
  double discount = 1.0;              // delta in (0, 1]

  std::size_t num_agents() const { return areas.size(); }
  std::size_t num_crops() const { return crop_names.size(); }
  /// Throws InvalidInput naming the first inconsistent field.
  void validate() const;
  bool operator==(const ScenarioInputs&) const = default;
};

struct AgentYear {
  double revenue = 0.0;          // U^R
  double extraction_cost = 0.0;  // U^E
  double production_cost = 0.0;  // U^P
  double net = 0.0;              // U^R - U^E - U^P (undiscounted)
  double pumped = 0.0;           // W_i(t), m³
};

struct SimulationResult {
  std::size_t num_agents = 0;
  std::size_t num_crops = 0;
  std::size_t num_years = 0;
  std::vector<double> areas;            // copied from the inputs for window volumes
  std::vector<AgentYear> panel;         // [i * T + t]
  std::vector<double> quantities;       // Q_{k,i}(t), bushels, [(i * K + k) * T + t]
  std::vector<double> prices;           // $/bushel, [t * K + k]
  std::vector<hydro::AquiferState> heads;  // T + 1 states, heads[0] = initial
  std::vector<double> utilities;        // discounted U_i
  double discount = 1.0;
  std::size_t negative_lift_events = 0;

  const AgentYear& at(std::size_t i, std::size_t t) const { return panel[i * num_years + t]; }
  double quantity(std::size_t i, std::size_t k, std::size_t t) const {
    return quantities[(i * num_crops + k) * num_years + t];
  }
};

/// Q = A * y * x (bushels) with y in bushels/m².
double harvest_quantity(double area_m2, double yield_per_m2, double fraction);

/// D_i(t) = sum_k (TR_k + IR_k) x[i][k][t], metres. `responses` is the
/// year-t row of per-crop responses (mm).
double depletion(std::size_t agent, std::size_t year, const JointStrategy& strategy,
                 std::span<const agronomy::CropResponse> responses);

/// Validates both arguments, then simulates years 1..T sequentially.
SimulationResult run_simulation(const JointStrategy& strategy, const ScenarioInputs& inputs);

/// W_i summed over the given 0-based years, m³. Throws on an empty or
/// out-of-range window.
double pumped_window(const SimulationResult& result, std::size_t agent,
                     std::span<const std::size_t> window);

/// Precomputed, allocation-light utility evaluation for the optimizer's
/// inner loop. Produces exactly the utilities run_simulation reports.
/// Skips input validation; callers pass strategies of the right shape.
/// Not thread-safe: use one evaluator per thread.
class UtilityEvaluator {
 public:
  explicit UtilityEvaluator(const ScenarioInputs& inputs);

  const ScenarioInputs& inputs() const { return *inputs_; }

  /// All N utilities into `out`.
  void utilities(const JointStrategy& strategy, std::span<double> out);
  /// Utility of one agent (still simulates everyone).
  double utility(const JointStrategy& strategy, std::size_t agent);

  /// W_i(t) in m³ for one agent and year; depends on the agent's own
  /// fractions only.
  double pumped(const JointStrategy& strategy, std::size_t agent, std::size_t t) const;

 private:
  const ScenarioInputs* inputs_;
  std::vector<double> depletion_rate_;  // [t * K + k], (TR + IR) in m
  std::vector<double> irrigation_m_;    // [t * K + k]
  std::vector<double> yield_m2_;        // [t * K + k]
  std::vector<double> utilities_buf_;

  friend SimulationResult run_simulation(const JointStrategy&, const ScenarioInputs&);
};

}  // namespace gwnash::sim
