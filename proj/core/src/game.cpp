#include "gwnash/game.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "gwnash/error.hpp"

namespace gwnash::game {

namespace {

using sim::JointStrategy;
using sim::ScenarioInputs;
using sim::UtilityEvaluator;

constexpr double kInvPhi = 0.6180339887498948482;
// Relative window excess tolerated before a LEMA run counts as violating.
constexpr double kLemaRelativeTolerance = 1e-3;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t vars_per_year(std::size_t crops) { return crops >= 2 ? crops - 1 : 1; }

double get_var(const JointStrategy& x, std::size_t i, std::size_t t, std::size_t j) {
  if (x.num_crops() >= 2 && j > 0) return x.at(i, j + 1, t);
  return x.at(i, 0, t);
}

void set_var(JointStrategy& x, std::size_t i, std::size_t t, std::size_t j, double v) {
  if (x.num_crops() >= 2) {
    if (j == 0) {
      x.at(i, 0, t) = v;
      x.at(i, 1, t) = 1.0 - v;
    } else {
      x.at(i, j + 1, t) = v;
    }
  } else {
    x.at(i, 0, t) = v;
  }
}

// Objective of one agent on a mutable working copy of the joint strategy.
class AgentObjective {
 public:
  AgentObjective(UtilityEvaluator& eval, const JointStrategy& work, std::size_t agent,
                 const LemaConstraint* lema, double weight)
      : eval_(eval), work_(work), agent_(agent), lema_(lema), weight_(weight),
        buf_(eval.inputs().num_agents()) {}

  double operator()() {
    eval_.utilities(work_, buf_);
    last_utility_ = buf_[agent_];
    if (lema_ == nullptr) return last_utility_;
    return last_utility_ - weight_ * lema_excess_squared(eval_, work_, agent_, *lema_);
  }
  double last_utility() const { return last_utility_; }

 private:
  UtilityEvaluator& eval_;
  const JointStrategy& work_;
  std::size_t agent_;
  const LemaConstraint* lema_;
  double weight_;
  std::vector<double> buf_;
  double last_utility_ = 0.0;
};

struct AscentOutcome {
  double objective = 0.0;
  int sweeps = 0;
  bool converged = false;
};

// Cyclic coordinate ascent over agent i's reduced variables in `work`.
// Each scalar is line-searched by golden section on [0, 1] down to `grid`,
// then the two endpoints are probed; a move is taken only on strict
// improvement, so the objective is non-decreasing.
AscentOutcome coordinate_ascent(AgentObjective& objective, JointStrategy& work, std::size_t i,
                                double grid, int max_sweeps, double tolerance) {
  const std::size_t years = work.num_years();
  const std::size_t m = vars_per_year(work.num_crops());
  AscentOutcome out;
  double current = objective();

  auto eval_at = [&](std::size_t t, std::size_t j, double v) {
    set_var(work, i, t, j, v);
    return objective();
  };

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    const double sweep_start = current;
    for (std::size_t t = 0; t < years; ++t) {
      for (std::size_t j = 0; j < m; ++j) {
        const double incumbent = get_var(work, i, t, j);
        double best_v = incumbent;
        double best_f = current;
        auto consider = [&](double v, double f) {
          if (f > best_f) {
            best_f = f;
            best_v = v;
          }
        };

        double a = 0.0;
        double b = 1.0;
        double c = b - kInvPhi * (b - a);
        double d = a + kInvPhi * (b - a);
        double fc = eval_at(t, j, c);
        double fd = eval_at(t, j, d);
        while (b - a > grid) {
          if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = eval_at(t, j, c);
          } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = eval_at(t, j, d);
          }
        }
        consider(c, fc);
        consider(d, fd);
        consider(0.0, eval_at(t, j, 0.0));
        consider(1.0, eval_at(t, j, 1.0));

        set_var(work, i, t, j, best_v);
        current = best_f;
      }
    }
    out.sweeps = sweep;
    if (current - sweep_start <= tolerance * std::max(1.0, std::abs(current))) {
      out.converged = true;
      break;
    }
  }
  out.objective = current;
  return out;
}

double auto_penalty_weight(const ScenarioInputs& inputs, const JointStrategy& x,
                           const LemaConstraint& lema) {
  UtilityEvaluator eval(inputs);
  std::vector<double> u(inputs.num_agents());
  eval.utilities(x, u);
  double typical_utility = 0.0;
  for (double v : u) typical_utility += std::abs(v);
  typical_utility = std::max(1.0, typical_utility / static_cast<double>(u.size()));
  double typical_limit = 0.0;
  std::size_t count = 0;
  for (const auto& row : lema.limits) {
    for (double l : row) {
      if (l > 0.0) {
        typical_limit += l;
        ++count;
      }
    }
  }
  typical_limit = count > 0 ? typical_limit / static_cast<double>(count) : 1.0;
  return 1e3 * typical_utility / (typical_limit * typical_limit);
}

void check_shape(const JointStrategy& x, const ScenarioInputs& inputs) {
  if (x.num_agents() != inputs.num_agents() || x.num_crops() != inputs.num_crops() ||
      x.num_years() != static_cast<std::size_t>(inputs.horizon)) {
    throw InvalidInput("strategy shape does not match the scenario");
  }
}

std::vector<double> window_excess(const UtilityEvaluator& eval, const JointStrategy& x,
                                  const LemaConstraint& lema, bool relative_only) {
  std::vector<double> out(x.num_agents(), 0.0);
  for (std::size_t i = 0; i < x.num_agents(); ++i) {
    for (std::size_t w = 0; w < lema.windows.size(); ++w) {
      double used = 0.0;
      for (std::size_t t : lema.windows[w]) used += eval.pumped(x, i, t);
      const double limit = lema.limits[i][w];
      double excess = std::max(0.0, used - limit);
      if (relative_only && excess <= kLemaRelativeTolerance * limit) excess = 0.0;
      out[i] = std::max(out[i], excess);
    }
  }
  return out;
}

}  // namespace

void RelaxationConfig::validate() const {
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidInput("relaxation.eta must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw InvalidInput("relaxation.epsilon must be > 0");
  if (max_iters < 1) throw InvalidInput("relaxation.max_iters must be >= 1");
  if (!(br_grid > 0.0 && br_grid <= 0.5)) throw InvalidInput("relaxation.br_grid must lie in (0, 0.5]");
  if (br_sweeps < 1) throw InvalidInput("relaxation.br_sweeps must be >= 1");
  if (!(penalty_init >= 0.0) || !std::isfinite(penalty_init)) throw InvalidInput("relaxation.penalty_init must be >= 0");
  if (!(penalty_growth >= 1.0) || !std::isfinite(penalty_growth)) throw InvalidInput("relaxation.penalty_growth must be >= 1");
  if (threads < 1) throw InvalidInput("relaxation.threads must be >= 1");
}

void LemaConstraint::validate(std::size_t num_agents, std::size_t horizon) const {
  std::size_t next = 0;
  for (const auto& w : windows) {
    if (w.empty()) throw InvalidInput("lema: empty window");
    for (std::size_t t : w) {
      if (t != next) throw InvalidInput("lema: windows must be consecutive, disjoint and ordered");
      ++next;
    }
  }
  if (next != horizon) throw InvalidInput("lema: windows do not cover the horizon");
  if (limits.size() != num_agents) throw InvalidInput("lema: one limit row per agent required");
  for (const auto& row : limits) {
    if (row.size() != windows.size()) throw InvalidInput("lema: one limit per window required");
    for (double l : row) {
      if (!(l >= 0.0) || !std::isfinite(l)) throw InvalidInput("lema: limits must be >= 0");
    }
  }
}

std::vector<std::vector<std::size_t>> consecutive_windows(std::size_t horizon, std::size_t length) {
  if (length == 0) throw InvalidInput("window length must be >= 1");
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t start = 0; start < horizon; start += length) {
    std::vector<std::size_t> w;
    for (std::size_t t = start; t < std::min(horizon, start + length); ++t) w.push_back(t);
    out.push_back(std::move(w));
  }
  return out;
}

JointStrategy project_to_feasible(JointStrategy x) {
  for (std::size_t i = 0; i < x.num_agents(); ++i) {
    for (std::size_t t = 0; t < x.num_years(); ++t) {
      std::size_t first_free = 0;
      if (x.num_crops() >= 2) {
        const double a0 = x.at(i, 0, t);
        // Already canonical pairs stay bit-identical.
        const bool canonical = a0 >= 0.0 && a0 <= 1.0 && x.at(i, 1, t) == 1.0 - a0;
        const double a = canonical ? a0 :std::clamp((x.at(i, 0, t) - x.at(i, 1, t) + 1.0) / 2.0, 0.0, 1.0);
        x.at(i, 0, t) = a;
        x.at(i, 1, t) = 1.0 - a;
        first_free = 2;
      }
      for (std::size_t k = first_free; k < x.num_crops(); ++k) {
        x.at(i, k, t) = std::clamp(x.at(i, k, t), 0.0, 1.0);
      }
    }
  }
  return x;
}

JointStrategy random_feasible_strategy(std::size_t agents, std::size_t crops, std::size_t years,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  JointStrategy x(agents, crops, years);
  const std::size_t m = vars_per_year(crops);
  for (std::size_t i = 0; i < agents; ++i) {
    for (std::size_t t = 0; t < years; ++t) {
      for (std::size_t j = 0; j < m; ++j) set_var(x, i, t, j, uniform01(rng));
    }
  }
  return x;
}

double lema_excess_squared(const UtilityEvaluator& eval, const JointStrategy& x, std::size_t agent,
                           const LemaConstraint& lema) {
  double total = 0.0;
  for (std::size_t w = 0; w < lema.windows.size(); ++w) {
    double used = 0.0;
    for (std::size_t t : lema.windows[w]) used += eval.pumped(x, agent, t);
    const double excess = used - lema.limits[agent][w];
    if (excess > 0.0) total += excess * excess;
  }
  return total;
}

double nikaido_isoda(const JointStrategy& x, const JointStrategy& y, const ScenarioInputs& inputs) {
  inputs.validate();
  check_shape(x, inputs);
  check_shape(y, inputs);
  x.validate();
  y.validate();

  UtilityEvaluator eval(inputs);
  const std::size_t n = inputs.num_agents();
  std::vector<double> base(n);
  std::vector<double> swapped(n);
  eval.utilities(x, base);
  JointStrategy mixed = x;
  double psi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(y.block(i).begin(), y.block(i).end(), mixed.block(i).begin());
    eval.utilities(mixed, swapped);
    psi += swapped[i] - base[i];
    std::copy(x.block(i).begin(), x.block(i).end(), mixed.block(i).begin());
  }
  return psi;
}

BestResponse best_response(std::size_t agent, const JointStrategy& x, const ScenarioInputs& inputs,
                           const LemaConstraint* lema, const RelaxationConfig& cfg,
                           double penalty_weight) {
  if (agent >= x.num_agents()) throw InvalidInput("best_response: agent out of range");
  UtilityEvaluator eval(inputs);
  JointStrategy work = x;
  AgentObjective objective(eval, work, agent, lema, penalty_weight);
  const AscentOutcome r =
      coordinate_ascent(objective, work, agent, cfg.br_grid, cfg.br_sweeps, cfg.epsilon / 10.0);

  BestResponse out;
  out.block.assign(work.block(agent).begin(), work.block(agent).end());
  out.objective = objective();
  out.utility = objective.last_utility();
  out.sweeps = r.sweeps;
  out.converged = r.converged;
  return out;
}

OptimumResponse optimum_response(const JointStrategy& x, const ScenarioInputs& inputs,
                                 const LemaConstraint* lema, const RelaxationConfig& cfg,
                                 double penalty_weight) {
  const std::size_t n = x.num_agents();
  OptimumResponse out;
  out.responses.resize(n);
  auto solve = [&](std::size_t i) {
    out.responses[i] = best_response(i, x, inputs, lema, cfg, penalty_weight);
  };
  const auto workers = static_cast<std::size_t>(std::max(1, cfg.threads));
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) solve(i);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) solve(i);
      });
    }
  }
  out.z = x;
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(out.responses[i].block.begin(), out.responses[i].block.end(),
              out.z.block(i).begin());
    out.all_converged = out.all_converged && out.responses[i].converged;
  }
  return out;
}

RelaxationResult relax_to_equilibrium(const std::optional<JointStrategy>& init,
                                      const ScenarioInputs& inputs, const LemaConstraint* lema,
                                      const RelaxationConfig& cfg) {
  cfg.validate();
  inputs.validate();
  const std::size_t n = inputs.num_agents();
  const auto years = static_cast<std::size_t>(inputs.horizon);
  if (lema != nullptr) lema->validate(n, years);

  JointStrategy x = init ? project_to_feasible(*init)
                         : random_feasible_strategy(n, inputs.num_crops(), years, cfg.seed);
  check_shape(x, inputs);

  RelaxationResult result;
  EquilibriumReport& report = result.report;
  report.seed = cfg.seed;
  double weight = 0.0;
  if (lema != nullptr) {
    weight = cfg.penalty_init > 0.0 ? cfg.penalty_init : auto_penalty_weight(inputs, x, *lema);
  }

  UtilityEvaluator eval(inputs);
  bool previous_violation = false;
  OptimumResponse opt = optimum_response(x, inputs, lema, cfg, weight);
  for (int l = 1;; ++l) {
    const double residual = opt.z.max_abs_diff(x);
    report.residual_history.push_back(residual);
    report.iterations = l;
    report.residual = residual;
    if (residual < cfg.epsilon) {
      report.converged = true;
      break;
    }
    if (l >= cfg.max_iters) break;

    if (lema != nullptr) {
      const auto excess = window_excess(eval, opt.z, *lema, true);
      const bool violation = std::any_of(excess.begin(), excess.end(), [](double e) { return e > 0.0; });
      if (violation && previous_violation) weight *= cfg.penalty_growth;
      previous_violation = violation;
    }

    auto xv = x.values();
    const auto zv = opt.z.values();
    for (std::size_t m = 0; m < xv.size(); ++m) xv[m] = (1.0 - cfg.eta) * xv[m] + cfg.eta * zv[m];
    x = project_to_feasible(std::move(x));
    opt = optimum_response(x, inputs, lema, cfg, weight);
  }

  report.penalty_weight = weight;
  report.utilities.resize(n);
  eval.utilities(x, report.utilities);
  report.psi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double base = report.utilities[i];
    if (lema != nullptr) base -= weight * lema_excess_squared(eval, x, i, *lema);
    report.psi += opt.responses[i].objective - base;
  }
  if (lema != nullptr) {
    report.violations = window_excess(eval, x, *lema, false);
    const auto beyond = window_excess(eval, x, *lema, true);
    report.feasible = std::all_of(beyond.begin(), beyond.end(), [](double e) { return e == 0.0; });
  } else {
    report.violations.assign(n, 0.0);
  }
  result.strategy = std::move(x);
  return result;
}

EquilibriumReport verify_equilibrium(const JointStrategy& x, const ScenarioInputs& inputs,
                                     const LemaConstraint* lema, const VerifyOptions& options) {
  inputs.validate();
  check_shape(x, inputs);
  x.validate();
  if (!(options.deviation_grid > 0.0 && options.deviation_grid <= 1.0)) {
    throw InvalidInput("verify: deviation_grid must lie in (0, 1]");
  }
  if (options.restarts < 0) throw InvalidInput("verify: restarts must be >= 0");
  const std::size_t n = inputs.num_agents();
  const std::size_t years = x.num_years();
  const std::size_t m = vars_per_year(x.num_crops());
  if (lema != nullptr) lema->validate(n, years);

  double weight = 0.0;
  if (lema != nullptr) {
    weight = options.penalty_weight > 0.0 ? options.penalty_weight
                                          : auto_penalty_weight(inputs, x, *lema);
  }
  RelaxationConfig search;
  search.br_grid = options.br_grid;
  search.br_sweeps = options.br_sweeps;

  EquilibriumReport report;
  report.seed = options.seed;
  report.penalty_weight = weight;
  report.utilities.resize(n);
  report.improvements.assign(n, 0.0);
  report.relative_improvements.assign(n, 0.0);
  report.converged = true;

  UtilityEvaluator eval(inputs);
  eval.utilities(x, report.utilities);
  const auto steps = static_cast<std::size_t>(std::llround(1.0 / options.deviation_grid));

  for (std::size_t i = 0; i < n; ++i) {
    JointStrategy work = x;
    AgentObjective objective(eval, work, i, lema, weight);
    const double base = objective();
    double best = base;

    // Warm best response: also yields this agent's share of psi(x, z(x)).
    const BestResponse warm = best_response(i, x, inputs, lema, search, weight);
    best = std::max(best, warm.objective);
    report.psi += warm.objective - base;
    for (std::size_t e = 0; e < warm.block.size(); ++e) {
      report.residual = std::max(report.residual, std::abs(warm.block[e] - x.block(i)[e]));
    }

    for (int r = 0; r < options.restarts; ++r) {
      const JointStrategy seed_block = random_feasible_strategy(
          1, x.num_crops(), years, options.seed + 0x9E3779B97F4A7C15ULL * (i + 1) + static_cast<std::uint64_t>(r));
      std::copy(seed_block.block(0).begin(), seed_block.block(0).end(), work.block(i).begin());
      const AscentOutcome o =
          coordinate_ascent(objective, work, i, search.br_grid, search.br_sweeps, search.epsilon / 10.0);
      best = std::max(best, o.objective);
      std::copy(x.block(i).begin(), x.block(i).end(), work.block(i).begin());
    }

    for (std::size_t t = 0; t < years; ++t) {
      for (std::size_t j = 0; j < m; ++j) {
        const double original = get_var(work, i, t, j);
        for (std::size_t s = 0; s <= steps; ++s) {
          set_var(work, i, t, j, static_cast<double>(s) / static_cast<double>(steps));
          best = std::max(best, objective());
        }
        set_var(work, i, t, j, original);
      }
    }

    report.improvements[i] = best - base;
    report.relative_improvements[i] = (best - base) / std::max(1.0, std::abs(base));
  }
  report.certified = std::all_of(report.relative_improvements.begin(),
                                 report.relative_improvements.end(),
                                 [&](double r) { return r <= options.certify_tolerance; });
  if (lema != nullptr) {
    report.violations = window_excess(eval, x, *lema, false);
    const auto beyond = window_excess(eval, x, *lema, true);
    report.feasible = std::all_of(beyond.begin(), beyond.end(), [](double e) { return e == 0.0; });
  } else {
    report.violations.assign(n, 0.0);
  }
  return report;
}

LemaConstraint lema_limits(const sim::SimulationResult& baseline, double fraction,
                           const std::vector<std::vector<std::size_t>>& windows) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidInput("lema fraction must lie in (0, 1], got " + std::to_string(fraction));
  }
  LemaConstraint lema;
  lema.windows = windows;
  lema.limits.resize(baseline.num_agents);
  for (std::size_t i = 0; i < baseline.num_agents; ++i) {
    for (const auto& w : windows) {
      lema.limits[i].push_back(fraction * sim::pumped_window(baseline, i, w));
    }
  }
  lema.validate(baseline.num_agents, baseline.num_years);
  return lema;
}

std::vector<double> lema_violations(const sim::SimulationResult& result,
                                    const LemaConstraint& lema) {
  std::vector<double> out(result.num_agents, 0.0);
  for (std::size_t i = 0; i < result.num_agents; ++i) {
    for (std::size_t w = 0; w < lema.windows.size(); ++w) {
      const double used = sim::pumped_window(result, i, lema.windows[w]);
      out[i] = std::max(out[i], std::max(0.0, used - lema.limits[i][w]));
    }
  }
  return out;
}

}  // namespace gwnash::game
