#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "fixtures.hpp"
#include "gwnash/error.hpp"
#include "gwnash/hydro.hpp"

using namespace gwnash;
using gwnash::testing::Rng;

namespace {

hydro::FlowNetwork two_agents(double a12, double boundary = 0.0) {
  return hydro::FlowNetwork(2, {0.0, boundary, boundary, boundary, 0.0, a12, boundary, a12, 0.0});
}

// Reference update written out term by term.
std::vector<double> naive_step(const std::vector<double>& g, double g0, const hydro::FlowNetwork& net,
                               double r, const std::vector<double>& d) {
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double flow = net.coeff(i + 1, 0) * (g0 - g[i]);
    for (std::size_t j = 0; j < g.size(); ++j) flow += net.coeff(i + 1, j + 1) * (g[j] - g[i]);
    out[i] = g[i] + r - d[i] + flow;
  }
  return out;
}

}  // namespace

TEST(NetReplenishment, Examples) {
  EXPECT_NEAR(hydro::net_replenishment(0.5, 0.2), 0.3, 1e-15);
  EXPECT_EQ(hydro::net_replenishment(0.4, 0.4), 0.0);
  EXPECT_LT(hydro::net_replenishment(0.1, 0.3), 0.0);
  EXPECT_THROW(hydro::net_replenishment(-0.1, 0.0), InvalidInput);
  EXPECT_THROW(hydro::net_replenishment(0.1, -0.2), InvalidInput);
}

TEST(NetExchange, EqualHeadsGiveZero) {
  Rng rng(3);
  const auto net = gwnash::testing::random_network(rng, 4, false);
  hydro::AquiferState s{{90.0, 90.0, 90.0, 90.0}, 90.0, 0};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(hydro::net_exchange(s, net, i), 0.0);
}

TEST(NetExchange, TwoAgentExample) {
  hydro::AquiferState s{{10.0, 0.0}, 0.0, 0};
  EXPECT_NEAR(hydro::net_exchange(s, two_agents(0.1), 0), -1.0, 1e-15);
  EXPECT_NEAR(hydro::net_exchange(s, two_agents(0.1), 1), 1.0, 1e-15);
}

TEST(NetExchange, BoundaryOnlyExample) {
  // Cell at 125 m above a surrounding aquifer at 118.8 m with a = 0.05.
  hydro::FlowNetwork net(1, {0.0, 0.05, 0.05, 0.0});
  hydro::AquiferState s{{125.0}, 118.8, 0};
  EXPECT_NEAR(hydro::net_exchange(s, net, 0), -0.31, 1e-12);
}

TEST(NetExchange, AgentOutOfRange) {
  hydro::AquiferState s{{1.0, 2.0}, 0.0, 0};
  EXPECT_THROW(hydro::net_exchange(s, two_agents(0.1), 2), InvalidInput);
}

TEST(FlowNetwork, RejectsInvalidMatrices) {
  EXPECT_THROW(hydro::FlowNetwork(1, {0.1, 0.0, 0.0, 0.0}), InvalidInput);   // self-flow
  EXPECT_THROW(hydro::FlowNetwork(1, {0.0, 0.1, 0.2, 0.0}), InvalidInput);   // asymmetric
  EXPECT_THROW(hydro::FlowNetwork(1, {0.0, -0.1, -0.1, 0.0}), InvalidInput); // negative
  EXPECT_THROW(hydro::FlowNetwork(1, {0.0, 1.5, 1.5, 0.0}), InvalidInput);   // row sum > 1
  EXPECT_THROW(hydro::FlowNetwork(2, {0.0, 0.1, 0.1, 0.0}), InvalidInput);   // wrong size
  EXPECT_NO_THROW(hydro::FlowNetwork(1, {0.0, 1.0, 1.0, 0.0}));
}

TEST(FlowNetwork, DefaultFiveAgentLayout) {
  const auto net = hydro::default_five_agent_network();
  ASSERT_EQ(net.num_agents(), 5u);
  for (std::size_t i = 1; i <= 5; ++i) EXPECT_DOUBLE_EQ(net.coeff(i, 0), 0.02);
  EXPECT_DOUBLE_EQ(net.coeff(1, 2), 0.05);
  EXPECT_DOUBLE_EQ(net.coeff(4, 5), 0.05);
  EXPECT_DOUBLE_EQ(net.coeff(1, 5), 0.0);
  EXPECT_DOUBLE_EQ(net.coeff(2, 3), 0.0);
}

TEST(StepHeads, TwoAgentExample) {
  hydro::AquiferState s{{10.0, 0.0}, 0.0, 4};
  hydro::HydroParams p{0.0, s};
  const std::vector<double> d{0.0, 0.0};
  const auto next = hydro::step_heads(s, two_agents(0.1), p, 0.0, d);
  EXPECT_NEAR(next.heads[0], 9.0, 1e-15);
  EXPECT_NEAR(next.heads[1], 1.0, 1e-15);
  EXPECT_EQ(next.year, 5);
  EXPECT_EQ(s.heads[0], 10.0);  // input untouched
}

TEST(StepHeads, BoundaryDropsByGammaWithoutNetwork) {
  hydro::AquiferState s{{125.0, 113.0}, 118.8, 0};
  hydro::HydroParams p{0.3048, s};
  const std::vector<double> d{0.0, 0.0};
  const auto next = hydro::step_heads(s, hydro::FlowNetwork::isolated(2), p, 0.0, d);
  EXPECT_EQ(next.heads, s.heads);
  EXPECT_EQ(next.boundary_head, 118.8 - 0.3048);
}

TEST(StepHeads, ReplenishmentBalancesDepletion) {
  hydro::AquiferState s{{80.0, 80.0, 80.0}, 80.0, 0};
  hydro::HydroParams p{0.0, s};
  Rng rng(9);
  const auto net = gwnash::testing::random_network(rng, 3, false);
  const std::vector<double> d{0.25, 0.25, 0.25};
  const auto next = hydro::step_heads(s, net, p, 0.25, d);
  for (double g : next.heads) EXPECT_EQ(g, 80.0);
}

TEST(StepHeads, Preconditions) {
  hydro::AquiferState s{{1.0, 2.0}, 0.0, 0};
  hydro::HydroParams p{0.0, s};
  const std::vector<double> short_d{0.1};
  const std::vector<double> neg_d{0.1, -0.1};
  EXPECT_THROW(hydro::step_heads(s, two_agents(0.1), p, 0.0, short_d), InvalidInput);
  EXPECT_THROW(hydro::step_heads(s, two_agents(0.1), p, 0.0, neg_d), InvalidInput);
  EXPECT_THROW(hydro::step_heads(s, hydro::FlowNetwork::isolated(3), p, 0.0, std::vector<double>{0, 0, 0}),
               InvalidInput);
}

TEST(StepHeads, NegativeHeadsAreLegal) {
  hydro::AquiferState s{{0.1}, 0.0, 0};
  hydro::HydroParams p{0.0, s};
  const std::vector<double> d{0.5};
  const auto next = hydro::step_heads(s, hydro::FlowNetwork::isolated(1), p, 0.0, d);
  EXPECT_NEAR(next.heads[0], -0.4, 1e-15);
}

// Property tests below draw random networks, heads and forcings.

TEST(HydroProperties, MatchesTermByTermUpdate) {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(6);
    const auto net = gwnash::testing::random_network(rng, n, false);
    hydro::AquiferState s;
    for (std::size_t i = 0; i < n; ++i) s.heads.push_back(rng.uniform(50.0, 150.0));
    s.boundary_head = rng.uniform(50.0, 150.0);
    std::vector<double> d(n);
    for (double& v : d) v = rng.uniform(0.0, 1.0);
    const double r = rng.uniform(-0.2, 0.5);
    hydro::HydroParams p{0.1, s};
    const auto next = hydro::step_heads(s, net, p, r, d);
    const auto ref = naive_step(s.heads, s.boundary_head, net, r, d);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(next.heads[i], ref[i], 1e-12);

    std::vector<double> out(n);
    hydro::step_heads_into(s.heads, s.boundary_head, net, r, d, out);
    EXPECT_EQ(out, next.heads);
  }
}

TEST(HydroProperties, ClosedNetworkConservesTotalHead) {
  Rng rng(202);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + rng.index(5);
    const auto net = gwnash::testing::random_network(rng, n, true);
    hydro::AquiferState s;
    for (std::size_t i = 0; i < n; ++i) s.heads.push_back(rng.uniform(50.0, 150.0));
    hydro::HydroParams p{0.0, s};
    const std::vector<double> d(n, 0.0);
    const double start = std::accumulate(s.heads.begin(), s.heads.end(), 0.0);
    double prev = start;
    for (int step = 0; step < 1000; ++step) {
      s = hydro::step_heads(s, net, p, 0.0, d);
      const double total = std::accumulate(s.heads.begin(), s.heads.end(), 0.0);
      ASSERT_LT(std::abs(total - prev), 1e-9) << "trial " << trial << " step " << step;
      prev = total;
    }
  }
}

TEST(HydroProperties, MaximumPrinciple) {
  Rng rng(303);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.index(6);
    const auto net = gwnash::testing::random_network(rng, n, false, 1.0);
    hydro::AquiferState s;
    for (std::size_t i = 0; i < n; ++i) s.heads.push_back(rng.uniform(-20.0, 200.0));
    s.boundary_head = rng.uniform(-20.0, 200.0);
    double lo = s.boundary_head, hi = s.boundary_head;
    for (double g : s.heads) lo = std::min(lo, g), hi = std::max(hi, g);
    hydro::HydroParams p{0.0, s};
    const auto next = hydro::step_heads(s, net, p, 0.0, std::vector<double>(n, 0.0));
    for (double g : next.heads) {
      EXPECT_GE(g, lo - 1e-12);
      EXPECT_LE(g, hi + 1e-12);
    }
  }
}

TEST(HydroProperties, TranslationInvariance) {
  Rng rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(6);
    const auto net = gwnash::testing::random_network(rng, n, false);
    hydro::AquiferState s;
    for (std::size_t i = 0; i < n; ++i) s.heads.push_back(rng.uniform(50.0, 150.0));
    s.boundary_head = rng.uniform(50.0, 150.0);
    std::vector<double> d(n);
    for (double& v : d) v = rng.uniform(0.0, 1.0);
    const double r = rng.uniform(-0.2, 0.5);
    const double c = rng.uniform(-100.0, 100.0);
    hydro::AquiferState shifted = s;
    for (double& g : shifted.heads) g += c;
    shifted.boundary_head += c;
    hydro::HydroParams p{0.3048, s};
    const auto a = hydro::step_heads(s, net, p, r, d);
    const auto b = hydro::step_heads(shifted, net, p, r, d);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(b.heads[i], a.heads[i] + c, 1e-10);
    EXPECT_NEAR(b.boundary_head, a.boundary_head + c, 1e-10);
  }
}

TEST(HydroProperties, BoundaryDrawdownIsExactlyGamma) {
  Rng rng(505);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.index(5);
    const auto net = gwnash::testing::random_network(rng, n, false);
    hydro::AquiferState s;
    for (std::size_t i = 0; i < n; ++i) s.heads.push_back(rng.uniform(50.0, 150.0));
    s.boundary_head = rng.uniform(50.0, 150.0);
    hydro::HydroParams p{0.3048, s};
    const auto next = hydro::step_heads(s, net, p, rng.uniform(0.0, 0.3), std::vector<double>(n, 0.1));
    EXPECT_EQ(next.boundary_head, s.boundary_head - 0.3048);
  }
}

TEST(HydroProperties, Deterministic) {
  Rng rng(606);
  const auto net = gwnash::testing::random_network(rng, 5, false);
  hydro::AquiferState s{{120, 110, 100, 130, 125}, 118.8, 0};
  hydro::HydroParams p{0.3048, s};
  const std::vector<double> d{0.3, 0.2, 0.1, 0.4, 0.5};
  EXPECT_EQ(hydro::step_heads(s, net, p, 0.1, d), hydro::step_heads(s, net, p, 0.1, d));
}
