#include "gwnash/hydro.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "gwnash/error.hpp"

namespace gwnash::hydro {

namespace {
constexpr double kStabilitySlack = 1e-12;
}

FlowNetwork::FlowNetwork(std::size_t num_agents, std::vector<double> coeffs)
    : num_agents_(num_agents), coeffs_(std::move(coeffs)) {
  const std::size_t n = num_nodes();
  if (coeffs_.size() != n * n) {
    throw InvalidInput("flow_matrix: expected " + std::to_string(n) + "x" + std::to_string(n) +
                       " entries, got " + std::to_string(coeffs_.size()));
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double v = coeff(a, b);
      const std::string where = "flow_matrix[" + std::to_string(a) + "][" + std::to_string(b) + "]";
      if (!std::isfinite(v) || v < 0.0) throw InvalidInput(where + " must be finite and >= 0");
      if (a == b && v != 0.0) throw InvalidInput(where + " must be 0 (no self-flow)");
      if (v != coeff(b, a)) throw InvalidInput(where + " breaks symmetry");
    }
  }
  for (std::size_t a = 1; a < n; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < n; ++b) row += coeff(a, b);
    if (row > 1.0 + kStabilitySlack) {
      throw InvalidInput("flow_matrix row " + std::to_string(a) +
                         " sums to more than 1 (explicit update would be unstable)");
    }
  }
}

FlowNetwork FlowNetwork::isolated(std::size_t num_agents) {
  return FlowNetwork(num_agents, std::vector<double>((num_agents + 1) * (num_agents + 1), 0.0));
}

double net_replenishment(double precip_total, double evaporation_total) {
  if (!(precip_total >= 0.0)) throw InvalidInput("precipitation must be >= 0");
  if (!(evaporation_total >= 0.0)) throw InvalidInput("evaporation must be >= 0");
  return precip_total - evaporation_total;
}

double net_exchange(const AquiferState& state, const FlowNetwork& net, std::size_t agent) {
  if (agent >= state.num_agents() || agent >= net.num_agents()) {
    throw InvalidInput("agent index " + std::to_string(agent) + " out of range");
  }
  const std::size_t node = agent + 1;
  const double own = state.heads[agent];
  double sum = net.coeff(node, 0) * (state.boundary_head - own);
  for (std::size_t j = 0; j < state.num_agents(); ++j) {
    if (j == agent) continue;
    sum += net.coeff(node, j + 1) * (state.heads[j] - own);
  }
  return sum;
}

void step_heads_into(std::span<const double> heads, double boundary_head, const FlowNetwork& net,
                     double replenishment, std::span<const double> depletion,
                     std::span<double> out) {
  const std::size_t n = heads.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t node = i + 1;
    const double own = heads[i];
    double exchange = net.coeff(node, 0) * (boundary_head - own);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) exchange += net.coeff(node, j + 1) * (heads[j] - own);
    }
    out[i] = own + replenishment - depletion[i] + exchange;
  }
}

AquiferState step_heads(const AquiferState& state, const FlowNetwork& net,
                        const HydroParams& params, double replenishment,
                        std::span<const double> depletion) {
  const std::size_t n = state.num_agents();
  if (net.num_agents() != n) throw InvalidInput("flow network size does not match state");
  if (depletion.size() != n) throw InvalidInput("depletion length does not match agent count");
  for (double d : depletion) {
    if (!(d >= 0.0)) throw InvalidInput("depletion entries must be >= 0");
  }
  AquiferState next;
  next.heads.resize(n);
  step_heads_into(state.heads, state.boundary_head, net, replenishment, depletion, next.heads);
  next.boundary_head = state.boundary_head - params.gamma;
  next.year = state.year + 1;
  return next;
}

FlowNetwork default_five_agent_network() {
  constexpr std::size_t n = 5;
  constexpr double kNeighbour = 0.05;
  constexpr double kBoundary = 0.02;
  constexpr std::size_t pairs[][2] = {{1, 2}, {1, 3}, {2, 4}, {3, 4}, {3, 5}, {4, 5}};
  std::vector<double> a((n + 1) * (n + 1), 0.0);
  for (const auto& p : pairs) {
    a[p[0] * (n + 1) + p[1]] = kNeighbour;
    a[p[1] * (n + 1) + p[0]] = kNeighbour;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    a[i] = kBoundary;
    a[i * (n + 1)] = kBoundary;
  }
  return FlowNetwork(n, std::move(a));
}

}  // namespace gwnash::hydro
