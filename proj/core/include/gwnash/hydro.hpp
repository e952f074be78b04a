#pragma once

// Lumped groundwater model: N agent cells exchanging water with each other
// and with one surrounding aquifer cell (node 0) through linear
// Darcy-type conductances. Heads advance one year per step.

#include <cstddef>
#include <span>
#include <vector>

namespace gwnash::hydro {

/// Heads of every agent cell plus the surrounding aquifer at one year.
/// Negative heads are legal: they report depletion below datum.
struct AquiferState {
  std::vector<double> heads;  // G_i, m, agent i stored at heads[i]
  double boundary_head = 0.0;  // G_0, m
  int year = 0;

  std::size_t num_agents() const { return heads.size(); }
  bool operator==(const AquiferState&) const = default;
};

/// Symmetric, zero-diagonal matrix of per-year exchange coefficients over
/// nodes 0..N where node 0 is the surrounding aquifer and node i+1 is
/// agent i. Construction validates non-negativity, symmetry, and the
/// explicit-scheme bound sum_j a(i,j) <= 1 for every agent row.
class FlowNetwork {
 public:
  FlowNetwork() = default;

  /// `coeffs` is row-major (N+1)x(N+1). Throws InvalidInput on violation.
  FlowNetwork(std::size_t num_agents, std::vector<double> coeffs);

  /// No exchange at all.
  static FlowNetwork isolated(std::size_t num_agents);

  std::size_t num_agents() const { return num_agents_; }
  std::size_t num_nodes() const { return num_agents_ + 1; }

  /// Coefficient between nodes (0 = boundary aquifer).
  double coeff(std::size_t node_a, std::size_t node_b) const {
    return coeffs_[node_a * num_nodes() + node_b];
  }
  const std::vector<double>& coeffs() const { return coeffs_; }

  bool operator==(const FlowNetwork&) const = default;

 private:
  std::size_t num_agents_ = 0;
  std::vector<double> coeffs_;
};

/// Shipped five-cell layout: 0.05 between the neighbouring pairs
/// (1,2) (1,3) (2,4) (3,4) (3,5) (4,5) and 0.02 from every cell to the
/// surrounding aquifer. An assumed geometry, overridable in configuration.
FlowNetwork default_five_agent_network();

struct HydroParams {
  double gamma = 0.0;  // boundary drawdown, m/year
  AquiferState initial_state;
  bool operator==(const HydroParams&) const = default;
};

/// R = P - E (m/year). Both inputs must be non-negative.
double net_replenishment(double precip_total, double evaporation_total);

/// Sum over all other nodes j of a(i,j) * (G_j - G_i) for agent `agent`
/// (0-based). Positive when neighbours stand higher.
double net_exchange(const AquiferState& state, const FlowNetwork& net, std::size_t agent);

/// One explicit year:
///   G_i' = G_i + R - D_i + sum_j a(i,j)(G_j - G_i)
///   G_0' = G_0 - gamma
AquiferState step_heads(const AquiferState& state, const FlowNetwork& net,
                        const HydroParams& params, double replenishment,
                        std::span<const double> depletion);

/// Allocation-free variant used by the simulator's inner loop. `out` must
/// have num_agents() entries and must not alias `heads`.
void step_heads_into(std::span<const double> heads, double boundary_head,
                     const FlowNetwork& net, double replenishment,
                     std::span<const double> depletion, std::span<double> out);

}  // namespace gwnash::hydro
