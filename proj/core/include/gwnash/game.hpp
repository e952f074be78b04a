#pragma once

// Nash equilibria of the irrigation game by Nikaido-Isoda relaxation.
//
// Each agent's strategy is reduced to per-year scalars in [0, 1]: the share
// of summer land under crop 0 (crop 1 takes the rest) and the share under
// each independent crop k >= 2. Best responses are computed by cyclic
// coordinate ascent with a golden-section line search per scalar, and the
// relaxation step x <- (1 - eta) x + eta z(x) is iterated until the
// optimum response stops moving. Optional LEMA caps on pumped volume per
// window enter each agent's objective as an exterior quadratic penalty.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gwnash/sim.hpp"

namespace gwnash::game {

struct RelaxationConfig {
  double eta = 0.1;
  double epsilon = 1e-4;  // stop when ||z(x) - x||_inf < epsilon
  int max_iters = 500;
  std::uint64_t seed = 1;
  double br_grid = 1e-3;  // golden-section bracket width
  int br_sweeps = 50;     // coordinate sweeps per best response
  double penalty_init = 0.0;  // 0 selects 1e3 * |typical utility| / typical_limit^2
  double penalty_growth = 10.0;
  int threads = 1;

  void validate() const;
  bool operator==(const RelaxationConfig&) const = default;
};

/// Per-agent caps on pumped volume over windows of 0-based years.
struct LemaConstraint {
  std::vector<std::vector<std::size_t>> windows;
  std::vector<std::vector<double>> limits;  // [agent][window], m³

  /// Windows must be disjoint, consecutive and cover 0..horizon-1; limits
  /// must be >= 0 with one per agent per window.
  void validate(std::size_t num_agents, std::size_t horizon) const;
};

/// Consecutive blocks of `length` years covering the horizon (the last one
/// shorter when the horizon is not a multiple of `length`).
std::vector<std::vector<std::size_t>> consecutive_windows(std::size_t horizon,
                                                          std::size_t length = 5);

struct EquilibriumReport {
  std::uint64_t seed = 0;
  int iterations = 0;
  double residual = 0.0;  // ||z(x) - x||_inf
  double psi = 0.0;       // psi(x, z(x))
  bool converged = false;
  std::vector<double> utilities;              // U_i(x)
  std::vector<double> improvements;           // best unilateral gain found, $
  std::vector<double> relative_improvements;  // gain / max(1, |U_i|)
  bool certified = false;
  std::vector<double> violations;  // max over windows of (W - L)+, m³
  bool feasible = true;
  double penalty_weight = 0.0;
  std::vector<double> residual_history;
};

/// Euclidean projection of each summer pair onto {a + b = 1, a, b >= 0};
/// other crops clamped to [0, 1]. Idempotent.
sim::JointStrategy project_to_feasible(sim::JointStrategy x);

/// Uniform random feasible strategy from a portable mt19937_64 stream.
sim::JointStrategy random_feasible_strategy(std::size_t agents, std::size_t crops,
                                            std::size_t years, std::uint64_t seed);

/// psi(x, y) = sum_i [U_i(y_i | x_-i) - U_i(x)].
double nikaido_isoda(const sim::JointStrategy& x, const sim::JointStrategy& y,
                     const sim::ScenarioInputs& inputs);

/// sum over windows of (W_iw - L_iw)+^2 for one agent.
double lema_excess_squared(const sim::UtilityEvaluator& eval, const sim::JointStrategy& x,
                           std::size_t agent, const LemaConstraint& lema);

struct BestResponse {
  std::vector<double> block;  // K*T fractions, same layout as JointStrategy::block
  double utility = 0.0;       // U_i at the response
  double objective = 0.0;     // utility minus LEMA penalty
  int sweeps = 0;
  bool converged = false;
};

/// Agent `agent`'s best response to x_-i, warm-started from x_i. The
/// returned objective never falls below that of x_i.
BestResponse best_response(std::size_t agent, const sim::JointStrategy& x,
                           const sim::ScenarioInputs& inputs, const LemaConstraint* lema,
                           const RelaxationConfig& cfg, double penalty_weight = 0.0);

struct OptimumResponse {
  sim::JointStrategy z;
  std::vector<BestResponse> responses;
  bool all_converged = true;
};

/// z(x): every agent's best response against the same frozen x. Agents
/// may run concurrently (cfg.threads); results merge by agent index.
OptimumResponse optimum_response(const sim::JointStrategy& x, const sim::ScenarioInputs& inputs,
                                 const LemaConstraint* lema, const RelaxationConfig& cfg,
                                 double penalty_weight = 0.0);

struct RelaxationResult {
  sim::JointStrategy strategy;
  EquilibriumReport report;
};

/// Relaxation from `init` (or a seeded random strategy).
RelaxationResult relax_to_equilibrium(const std::optional<sim::JointStrategy>& init,
                                      const sim::ScenarioInputs& inputs,
                                      const LemaConstraint* lema, const RelaxationConfig& cfg);

struct VerifyOptions {
  double deviation_grid = 0.05;  // single-coordinate probes at multiples of this step
  int restarts = 3;              // fresh coordinate searches from random blocks
  std::uint64_t seed = 7;
  double certify_tolerance = 1e-3;  // relative improvement accepted as epsilon-Nash
  double br_grid = 1e-3;
  int br_sweeps = 50;
  double penalty_weight = 0.0;  // used only when a LEMA is given

  bool operator==(const VerifyOptions&) const = default;
};

/// Searches each agent's unilateral deviations and reports the largest
/// improvement found. Refining deviation_grid (by an integer factor) never
/// reduces the reported improvement.
EquilibriumReport verify_equilibrium(const sim::JointStrategy& x,
                                     const sim::ScenarioInputs& inputs,
                                     const LemaConstraint* lema, const VerifyOptions& options);

/// L_iw = fraction * W_iw of the baseline run, for 0 < fraction <= 1.
LemaConstraint lema_limits(const sim::SimulationResult& baseline, double fraction,
                           const std::vector<std::vector<std::size_t>>& windows);

/// Per-agent worst window excess (W - L)+ in m³.
std::vector<double> lema_violations(const sim::SimulationResult& result,
                                    const LemaConstraint& lema);

}  // namespace gwnash::game
