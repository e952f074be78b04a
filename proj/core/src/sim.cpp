#include "gwnash/sim.hpp"

#include <cmath>
#include <string>

#include "gwnash/error.hpp"
#include "gwnash/units.hpp"

namespace gwnash::sim {

JointStrategy::JointStrategy(std::size_t agents, std::size_t crops, std::size_t years, double fill)
    : agents_(agents), crops_(crops), years_(years), x_(agents * crops * years, fill) {}

void JointStrategy::validate(double tol) const {
  for (std::size_t i = 0; i < agents_; ++i) {
    for (std::size_t t = 0; t < years_; ++t) {
      for (std::size_t k = 0; k < crops_; ++k) {
        const double v = at(i, k, t);
        if (!(v >= 0.0 && v <= 1.0)) {
          throw InvalidInput("strategy x[" + std::to_string(i) + "][" + std::to_string(k) + "][" +
                             std::to_string(t) + "] = " + std::to_string(v) +
                             " outside [0, 1]");
        }
      }
      if (crops_ >= 2 && std::abs(at(i, 0, t) + at(i, 1, t) - 1.0) > tol) {
        throw InvalidInput("strategy: summer fractions of agent " + std::to_string(i) +
                           " in year " + std::to_string(t) + " do not sum to 1");
      }
    }
  }
}

bool JointStrategy::is_feasible(double tol) const {
  try {
    validate(tol);
  } catch (const InvalidInput&) {
    return false;
  }
  return true;
}

double JointStrategy::max_abs_diff(const JointStrategy& other) const {
  if (other.agents_ != agents_ || other.crops_ != crops_ || other.years_ != years_) {
    throw InvalidInput("max_abs_diff: strategy shapes differ");
  }
  double m = 0.0;
  for (std::size_t n = 0; n < x_.size(); ++n) m = std::max(m, std::abs(x_[n] - other.x_[n]));
  return m;
}

void ScenarioInputs::validate() const {
  if (horizon < 1) throw InvalidInput("horizon must be >= 1");
  const std::size_t n = num_agents();
  const std::size_t k = num_crops();
  const auto years = static_cast<std::size_t>(horizon);
  if (n == 0) throw InvalidInput("at least one agent is required");
  if (k == 0) throw InvalidInput("at least one crop is required");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(areas[i] > 0.0) || !std::isfinite(areas[i])) {
      throw InvalidInput("agents[" + std::to_string(i) + "].area must be > 0");
    }
  }
  if (network.num_agents() != n) throw InvalidInput("flow network size does not match agents");
  if (hydro.initial_state.heads.size() != n) throw InvalidInput("initial heads do not match agents");
  for (double g : hydro.initial_state.heads) {
    if (!std::isfinite(g)) throw InvalidInput("initial heads must be finite");
  }
  if (!std::isfinite(hydro.initial_state.boundary_head)) throw InvalidInput("boundary head must be finite");
  if (!(hydro.gamma >= 0.0) || !std::isfinite(hydro.gamma)) throw InvalidInput("hydro.gamma must be >= 0");
  if (crop_responses.size() != years) throw InvalidInput("crop responses do not cover the horizon");
  for (std::size_t t = 0; t < years; ++t) {
    if (crop_responses[t].size() != k) throw InvalidInput("crop responses: wrong crop count");
    for (const auto& r : crop_responses[t]) {
      if (!(r.transpiration >= 0.0 && r.irrigation >= 0.0 && r.evapotranspiration >= 0.0 &&
            r.season_precip >= 0.0 && r.yield >= 0.0)) {
        throw InvalidInput("crop responses must be non-negative (year index " +
                           std::to_string(t) + ")");
      }
      if (r.evapotranspiration < r.transpiration) {
        throw InvalidInput("crop responses: ET below TR (year index " + std::to_string(t) + ")");
      }
    }
  }
  if (replenishment.size() != years) throw InvalidInput("replenishment does not cover the horizon");
  for (double r : replenishment) {
    if (!std::isfinite(r)) throw InvalidInput("replenishment must be finite");
  }
  if (!(discount > 0.0 && discount <= 1.0)) throw InvalidInput("discount must lie in (0, 1]");
  if (market.crops.size() != k) throw InvalidInput("market parameters: wrong crop count");
  if (costs.crops.size() != k) throw InvalidInput("cost parameters: wrong crop count");
  if (energy.surface_elevation.size() != n) throw InvalidInput("surface elevations do not match agents");
  market.validate();
  costs.validate();
  energy.validate();
}

double harvest_quantity(double area_m2, double yield_per_m2, double fraction) {
  if (!(area_m2 >= 0.0 && yield_per_m2 >= 0.0 && fraction >= 0.0 && fraction <= 1.0)) {
    throw InvalidInput("harvest_quantity: arguments must be >= 0 with fraction <= 1");
  }
  return area_m2 * yield_per_m2 * fraction;
}

double depletion(std::size_t agent, std::size_t year, const JointStrategy& strategy,
                 std::span<const agronomy::CropResponse> responses) {
  if (responses.size() != strategy.num_crops()) {
    throw InvalidInput("depletion: response count does not match crops");
  }
  double d = 0.0;
  for (std::size_t k = 0; k < responses.size(); ++k) {
    d += units::mm_to_m(responses[k].transpiration + responses[k].irrigation) *
         strategy.at(agent, k, year);
  }
  return d;
}

namespace {

struct Workspace {
  std::vector<double> heads;
  std::vector<double> next_heads;
  std::vector<double> depletion;
  std::vector<double> supply;
  std::vector<double> price;
};

}  // namespace

// One code path serves both the recorded simulation and the fast utility
// evaluation so their utilities agree bit for bit.
static void simulate(const ScenarioInputs& in, const JointStrategy& x,
                     std::span<const double> depletion_rate, std::span<const double> irrigation_m,
                     std::span<const double> yield_m2, std::span<double> utilities,
                     SimulationResult* rec) {
  const std::size_t n = in.num_agents();
  const std::size_t nk = in.num_crops();
  const auto years = static_cast<std::size_t>(in.horizon);

  thread_local Workspace ws;
  ws.heads.assign(in.hydro.initial_state.heads.begin(), in.hydro.initial_state.heads.end());
  ws.next_heads.resize(n);
  ws.depletion.resize(n);
  ws.supply.resize(nk);
  ws.price.resize(nk);
  double boundary = in.hydro.initial_state.boundary_head;

  for (std::size_t i = 0; i < n; ++i) utilities[i] = 0.0;
  double weight = 1.0;

  for (std::size_t t = 0; t < years; ++t) {
    const int model_year = static_cast<int>(t) + 1;
    const std::size_t row = t * nk;

    for (std::size_t k = 0; k < nk; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += in.areas[i] * yield_m2[row + k] * x.at(i, k, t);
      ws.supply[k] = s;
      ws.price[k] = econ::crop_price(in.market, k, model_year, s);
    }

    for (std::size_t i = 0; i < n; ++i) {
      const double area = in.areas[i];
      double revenue = 0.0;
      double production = 0.0;
      double irrigation_depth = 0.0;
      double dep = 0.0;
      for (std::size_t k = 0; k < nk; ++k) {
        const double frac = x.at(i, k, t);
        const double q = area * yield_m2[row + k] * frac;
        revenue += ws.price[k] * q;
        const double planted = area * frac;
        production += econ::production_cost_rate(in.costs, k, model_year, planted) * planted;
        irrigation_depth += irrigation_m[row + k] * frac;
        dep += depletion_rate[row + k] * frac;
        if (rec != nullptr) rec->quantities[(i * nk + k) * years + t] = q;
      }
      const double pumped = area * irrigation_depth;
      // Pumping cost uses the head at the start of the season.
      const econ::PumpingCost ep = econ::pumping_unit_cost(in.energy, i, model_year, ws.heads[i]);
      const double extraction = ep.per_m3 * pumped;
      const double net = revenue - extraction - production;
      utilities[i] += weight * net;
      ws.depletion[i] = dep;
      if (rec != nullptr) {
        rec->panel[i * years + t] = AgentYear{revenue, extraction, production, net, pumped};
        if (ep.negative_lift) ++rec->negative_lift_events;
      }
    }
    if (rec != nullptr) {
      for (std::size_t k = 0; k < nk; ++k) rec->prices[row + k] = ws.price[k];
    }

    hydro::step_heads_into(ws.heads, boundary, in.network, in.replenishment[t], ws.depletion,
                           ws.next_heads);
    std::swap(ws.heads, ws.next_heads);
    boundary -= in.hydro.gamma;
    weight *= in.discount;
    if (rec != nullptr) rec->heads.push_back(hydro::AquiferState{ws.heads, boundary, model_year});
  }
}

UtilityEvaluator::UtilityEvaluator(const ScenarioInputs& inputs) : inputs_(&inputs) {
  const auto years = static_cast<std::size_t>(inputs.horizon);
  const std::size_t nk = inputs.num_crops();
  depletion_rate_.resize(years * nk);
  irrigation_m_.resize(years * nk);
  yield_m2_.resize(years * nk);
  for (std::size_t t = 0; t < years; ++t) {
    for (std::size_t k = 0; k < nk; ++k) {
      const auto& r = inputs.crop_responses[t][k];
      depletion_rate_[t * nk + k] = units::mm_to_m(r.transpiration + r.irrigation);
      irrigation_m_[t * nk + k] = units::mm_to_m(r.irrigation);
      yield_m2_[t * nk + k] = units::per_acre_to_per_m2(r.yield);
    }
  }
  utilities_buf_.resize(inputs.num_agents());
}

void UtilityEvaluator::utilities(const JointStrategy& strategy, std::span<double> out) {
  simulate(*inputs_, strategy, depletion_rate_, irrigation_m_, yield_m2_, out, nullptr);
}

double UtilityEvaluator::utility(const JointStrategy& strategy, std::size_t agent) {
  utilities(strategy, utilities_buf_);
  return utilities_buf_[agent];
}

double UtilityEvaluator::pumped(const JointStrategy& strategy, std::size_t agent,
                                std::size_t t) const {
  const std::size_t nk = inputs_->num_crops();
  double depth = 0.0;
  for (std::size_t k = 0; k < nk; ++k) depth += irrigation_m_[t * nk + k] * strategy.at(agent, k, t);
  return inputs_->areas[agent] * depth;
}

SimulationResult run_simulation(const JointStrategy& strategy, const ScenarioInputs& inputs) {
  inputs.validate();
  const auto years = static_cast<std::size_t>(inputs.horizon);
  if (strategy.num_agents() != inputs.num_agents() || strategy.num_crops() != inputs.num_crops() ||
      strategy.num_years() != years) {
    throw InvalidInput("strategy shape does not match the scenario");
  }
  strategy.validate();

  const std::size_t n = inputs.num_agents();
  const std::size_t nk = inputs.num_crops();
  SimulationResult res;
  res.num_agents = n;
  res.num_crops = nk;
  res.num_years = years;
  res.areas = inputs.areas;
  res.discount = inputs.discount;
  res.panel.resize(n * years);
  res.quantities.resize(n * nk * years);
  res.prices.resize(years * nk);
  res.utilities.resize(n);
  res.heads.reserve(years + 1);
  res.heads.push_back(inputs.hydro.initial_state);
  res.heads.front().year = 0;

  UtilityEvaluator eval(inputs);
  simulate(inputs, strategy, eval.depletion_rate_, eval.irrigation_m_, eval.yield_m2_,
           res.utilities, &res);
  return res;
}

double pumped_window(const SimulationResult& result, std::size_t agent,
                     std::span<const std::size_t> window) {
  if (window.empty()) throw InvalidInput("pumped_window: empty window");
  if (agent >= result.num_agents) throw InvalidInput("pumped_window: agent out of range");
  double w = 0.0;
  for (std::size_t t : window) {
    if (t >= result.num_years) throw InvalidInput("pumped_window: year outside the horizon");
    w += result.at(agent, t).pumped;
  }
  return w;
}

}  // namespace gwnash::sim
