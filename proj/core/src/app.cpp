#include "gwnash/app.hpp"

#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>

#include "detail/text.hpp"
#include "gwnash/csv_io.hpp"
#include "gwnash/error.hpp"
#include "gwnash/plots.hpp"

namespace gwnash::app {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using detail::format_double;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

void log_solve(std::ostream& log, const SolveOutcome& o) {
  const auto& e = o.equilibrium;
  log << (e.converged ? "converged" : "NOT converged") << " after " << e.iterations
      << " iterations, residual " << fmt("%.3g", e.residual) << ", psi " << fmt("%.3g", e.psi)
      << '\n';
  log << "certification: " << (o.certification.certified ? "certified" : "NOT certified")
      << " (max relative improvement ";
  double worst = 0.0;
  for (double r : o.certification.relative_improvements) worst = std::max(worst, r);
  log << fmt("%.3g", worst) << ")\n";
  if (!e.feasible) log << "warning: LEMA caps violated beyond tolerance\n";
  for (std::size_t i = 0; i < o.result.utilities.size(); ++i) {
    log << "  agent " << (i + 1) << ": utility " << fmt("%.2f", o.result.utilities[i]) << '\n';
  }
}

io::RunRecord record_for(const std::string& command, const io::RunConfig& cfg,
                         const SolveOutcome& o) {
  io::RunRecord rec;
  rec.command = command;
  rec.config = cfg;
  rec.equilibrium = o.equilibrium;
  rec.certification = o.certification;
  rec.surrogate = o.surrogate;
  return rec;
}

std::string fraction_dir(double f) { return "lema_" + fmt("%.2f", f); }

double max_relative_violation(const sim::SimulationResult& r, const game::LemaConstraint& lema) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.num_agents; ++i) {
    for (std::size_t w = 0; w < lema.windows.size(); ++w) {
      const double used = sim::pumped_window(r, i, lema.windows[w]);
      const double cap = lema.limits[i][w];
      const double rel = cap > 0.0 ? used / cap - 1.0 : (used > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

}  // namespace

sim::ScenarioInputs resolve_inputs(const io::RunConfig& cfg,
                                   scenarios::SurrogateDiagnostics* diagnostics) {
  return scenarios::apply_scenario(cfg.weather, cfg.model, cfg.scenario, diagnostics);
}

SolveOutcome solve(const io::RunConfig& cfg, const game::LemaConstraint* lema,
                   const std::optional<sim::JointStrategy>& init) {
  SolveOutcome o;
  o.inputs = resolve_inputs(cfg, &o.surrogate);
  auto relaxed = game::relax_to_equilibrium(init, o.inputs, lema, cfg.relaxation);
  o.strategy = std::move(relaxed.strategy);
  o.equilibrium = std::move(relaxed.report);
  game::VerifyOptions v = cfg.verify;
  v.penalty_weight = o.equilibrium.penalty_weight;
  o.certification = game::verify_equilibrium(o.strategy, o.inputs, lema, v);
  o.result = sim::run_simulation(o.strategy, o.inputs);
  return o;
}

fs::path output_dir(const io::RunConfig& cfg) {
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  return fs::path("out") / cfg.scenario.name;
}

int run_solve(const io::RunConfig& cfg, std::ostream& log, const std::string& command) {
  const fs::path dir = output_dir(cfg);
  log << "solving scenario '" << cfg.scenario.name << "' (seed " << cfg.relaxation.seed << ")\n";
  const SolveOutcome o = solve(cfg);
  log_solve(log, o);
  io::write_results(dir, o.strategy, o.result, record_for(command, cfg, o));
  io::render_plots(dir, o.strategy, cfg.model.crop_names, o.result);
  log << "results written to " << dir.string() << '\n';
  return o.equilibrium.converged ? kExitOk : kExitNotConverged;
}

int run_simulate(const io::RunConfig& cfg, std::ostream& log) {
  if (cfg.strategy_csv.empty()) throw InvalidInput("simulate needs a strategy file (--strategy)");
  const fs::path dir = output_dir(cfg);
  scenarios::SurrogateDiagnostics diag;
  const auto inputs = resolve_inputs(cfg, &diag);
  const auto x = io::load_strategy_csv(cfg.strategy_csv);
  if (x.num_agents() != inputs.num_agents() || x.num_crops() != inputs.num_crops() ||
      x.num_years() != static_cast<std::size_t>(inputs.horizon)) {
    throw InvalidInput(cfg.strategy_csv.string() + ": strategy shape " +
                       std::to_string(x.num_agents()) + "x" + std::to_string(x.num_crops()) + "x" +
                       std::to_string(x.num_years()) + " does not match the configuration (" +
                       std::to_string(inputs.num_agents()) + "x" +
                       std::to_string(inputs.num_crops()) + "x" + std::to_string(inputs.horizon) +
                       ")");
  }
  const auto result = sim::run_simulation(x, inputs);
  io::RunRecord rec;
  rec.command = "simulate";
  rec.config = cfg;
  rec.surrogate = diag;
  io::write_results(dir, x, result, rec);
  io::render_plots(dir, x, cfg.model.crop_names, result);
  for (std::size_t i = 0; i < result.utilities.size(); ++i) {
    log << "  agent " << (i + 1) << ": utility " << fmt("%.2f", result.utilities[i]) << '\n';
  }
  log << "results written to " << dir.string() << '\n';
  return kExitOk;
}

bool trend_to_080(double baseline_aggregate, const std::vector<SweepPoint>& points) {
  std::vector<std::pair<double, double>> xy{{1.0, baseline_aggregate}};
  for (const auto& p : points) {
    if (p.fraction >= 0.80 - 1e-12 && p.fraction < 1.0) xy.emplace_back(p.fraction, p.aggregate_utility);
  }
  if (xy.size() < 2) return false;
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(xy.size());
  my /= static_cast<double>(xy.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [x, y] : xy) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxx > 0.0 && sxy / sxx < 0.0;
}

int run_lema_sweep(const io::RunConfig& cfg, std::ostream& log) {
  std::vector<double> fractions = cfg.scenario.lema_fractions;
  if (fractions.empty()) fractions = scenarios::builtin_scenario("lema_sweep").lema_fractions;
  const fs::path dir = output_dir(cfg);
  int status = kExitOk;

  log << "baseline equilibrium (no cap)\n";
  SweepOutcome sweep;
  sweep.baseline = solve(cfg);
  log_solve(log, sweep.baseline);
  if (!sweep.baseline.equilibrium.converged) status = kExitNotConverged;
  {
    io::RunConfig base_cfg = cfg;
    base_cfg.scenario.lema_fractions.clear();
    io::write_results(dir / "baseline", sweep.baseline.strategy, sweep.baseline.result,
                      record_for("solve", base_cfg, sweep.baseline));
    io::render_plots(dir / "baseline", sweep.baseline.strategy, cfg.model.crop_names,
                     sweep.baseline.result);
  }
  const double base_aggregate = sum(sweep.baseline.result.utilities);
  const auto windows = game::consecutive_windows(sweep.baseline.result.num_years, 5);

  for (double f : fractions) {
    log << "LEMA cap " << fmt("%.2f", f) << " x baseline pumping\n";
    const auto lema = game::lema_limits(sweep.baseline.result, f, windows);
    const SolveOutcome o = solve(cfg, &lema, sweep.baseline.strategy);
    log_solve(log, o);
    if (!o.equilibrium.converged) status = kExitNotConverged;

    SweepPoint p;
    p.fraction = f;
    p.utilities = o.result.utilities;
    p.aggregate_utility = sum(o.result.utilities);
    p.converged = o.equilibrium.converged;
    p.max_relative_violation = max_relative_violation(o.result, lema);
    p.feasible = p.max_relative_violation <= 1e-3;
    sweep.points.push_back(p);

    io::RunConfig point_cfg = cfg;
    point_cfg.scenario.lema_fractions = {f};
    io::RunRecord rec = record_for("lema-sweep", point_cfg, o);
    rec.lema = io::LemaRecord{f, lema.windows, lema.limits};
    const fs::path sub = dir / fraction_dir(f);
    io::write_results(sub, o.strategy, o.result, rec);
    io::render_plots(sub, o.strategy, cfg.model.crop_names, o.result);
  }
  sweep.upward_trend_to_080 = trend_to_080(base_aggregate, sweep.points);

  std::string csv = "fraction,aggregate_utility,converged,feasible,max_relative_violation";
  for (std::size_t i = 0; i < cfg.model.areas.size(); ++i) csv += ",agent_" + std::to_string(i + 1);
  csv += '\n';
  csv += "1," + format_double(base_aggregate) + "," +
         (sweep.baseline.equilibrium.converged ? "1" : "0") + ",1,0";
  for (double u : sweep.baseline.result.utilities) csv += ',' + format_double(u);
  csv += '\n';
  for (const auto& p : sweep.points) {
    csv += format_double(p.fraction) + ',' + format_double(p.aggregate_utility) + ',' +
           (p.converged ? "1" : "0") + ',' + (p.feasible ? "1" : "0") + ',' +
           format_double(p.max_relative_violation);
    for (double u : p.utilities) csv += ',' + format_double(u);
    csv += '\n';
  }
  detail::write_file(dir / "sweep.csv", csv);

  std::vector<double> fr, agg;
  for (const auto& p : sweep.points) {
    fr.push_back(p.fraction);
    agg.push_back(p.aggregate_utility);
  }
  io::render_lema_plot(dir, fr, agg);

  // Root report: enough to re-run the whole sweep plus the per-cap summary.
  ordered_json base_report = ordered_json::parse(
      io::report_to_json(record_for("lema-sweep", cfg, sweep.baseline), sweep.baseline.result));
  ordered_json root;
  root["command"] = "lema-sweep";
  root["seed"] = base_report["seed"];
  root["hyperparameters"] = base_report["hyperparameters"];
  root["scenario"] = cfg.scenario.name;
  root["baseline_aggregate_utility"] = base_aggregate;
  ordered_json pts = ordered_json::array();
  for (const auto& p : sweep.points) {
    pts.push_back({{"fraction", p.fraction},
                   {"aggregate_utility", p.aggregate_utility},
                   {"converged", p.converged},
                   {"feasible", p.feasible},
                   {"max_relative_violation", p.max_relative_violation},
                   {"utilities", p.utilities}});
  }
  root["sweep"] = pts;
  root["upward_trend_to_0.80"] = sweep.upward_trend_to_080;
  root["config"] = base_report["config"];
  detail::write_file(dir / "report.json", root.dump(2) + "\n");

  log << "fraction  aggregate utility  feasible\n";
  log << "    1.00  " << fmt("%17.2f", base_aggregate) << "  baseline\n";
  for (const auto& p : sweep.points) {
    log << "    " << fmt("%.2f", p.fraction) << "  " << fmt("%17.2f", p.aggregate_utility) << "  "
        << (p.feasible ? "yes" : "NO") << '\n';
  }
  log << "aggregate utility rises as the cap tightens to 0.80: "
      << (sweep.upward_trend_to_080 ? "yes" : "no") << '\n';
  log << "results written to " << dir.string() << '\n';
  return status;
}

int run_report(const fs::path& dir, const std::optional<fs::path>& out, std::ostream& log) {
  const auto stored = io::load_report(dir / "report.json");
  if (!fs::exists(dir / "strategies.csv")) {
    throw InvalidInput(dir.string() + " holds no strategies.csv (a sweep root? use one of its subdirectories)");
  }
  const auto x = io::load_strategy_csv(dir / "strategies.csv");
  const auto inputs = resolve_inputs(stored.config);
  const auto result = sim::run_simulation(x, inputs);

  bool consistent = stored.utilities.size() == result.utilities.size();
  for (std::size_t i = 0; consistent && i < result.utilities.size(); ++i) {
    const double scale = std::max(1.0, std::abs(stored.utilities[i]));
    consistent = std::abs(stored.utilities[i] - result.utilities[i]) <= 1e-9 * scale;
  }
  const fs::path target = out.value_or(dir);
  io::render_plots(target, x, stored.config.model.crop_names, result);

  log << "run: " << stored.command << ", scenario '" << stored.config.scenario.name << "', seed "
      << stored.config.relaxation.seed;
  if (stored.lema_fraction) log << ", LEMA cap " << fmt("%.2f", *stored.lema_fraction);
  log << '\n';
  log << "agent      utility   pumped (m3)   final head (m)\n";
  for (std::size_t i = 0; i < result.num_agents; ++i) {
    double w = 0.0;
    for (std::size_t t = 0; t < result.num_years; ++t) w += result.at(i, t).pumped;
    log << fmt("%5.0f", static_cast<double>(i + 1)) << fmt("  %12.2f", result.utilities[i])
        << fmt("  %12.0f", w) << fmt("  %15.3f", result.heads.back().heads[i]) << '\n';
  }
  log << "plots written to " << target.string() << '\n';
  if (!consistent) {
    log << "error: re-simulated utilities differ from report.json\n";
    return kExitInvalid;
  }
  return kExitOk;
}

int run_fit_surrogate(const fs::path& training, const fs::path& model_out, std::ostream& log) {
  const auto table = io::load_training_csv(training);
  std::vector<agronomy::CropSurrogate> crops;
  for (const auto& name : table.crops) {
    const auto& rows = table.rows.at(name);
    const auto fit = agronomy::fit_surrogate(rows, name);
    log << name << ": " << rows.size() << " rows, RMSE";
    for (std::size_t c = 0; c < agronomy::kNumChannels; ++c) {
      log << ' ' << agronomy::kChannelNames[c] << '=' << fmt("%.4g", fit.rmse[c]);
    }
    if (fit.ridge_fallback) log << " (warning: rank-deficient design, ridge fallback used)";
    log << '\n';
    crops.push_back(fit.model);
  }
  if (model_out.has_parent_path()) fs::create_directories(model_out.parent_path());
  io::save_surrogate_csv(model_out, agronomy::SurrogateModel(std::move(crops)));
  log << "surrogate written to " << model_out.string() << '\n';
  return kExitOk;
}

int run_fit_trends(const io::RunConfig& cfg, const TrendInputs& inputs, const fs::path& config_out,
                   std::ostream& log) {
  io::RunConfig out = cfg;
  auto crop_index = [&](const std::string& name) {
    for (std::size_t k = 0; k < cfg.model.crop_names.size(); ++k) {
      if (cfg.model.crop_names[k] == name) return k;
    }
    throw InvalidInput("unknown crop '" + name + "' in trend inputs");
  };
  auto fit = [&](const std::string& label, const fs::path& path) {
    const auto series = io::load_trend_csv(path);
    const auto trend = econ::fit_exponential_trend(series);
    log << label << ": v0 " << fmt("%.6g", trend.init_value) << ", rate " << fmt("%.6g", trend.rate)
        << "/year";
    if (const auto tau = trend.time_constant()) log << ", time constant " << fmt("%.6g", *tau) << " years";
    log << '\n';
    return trend.time_constant();
  };
  for (const auto& [name, path] : inputs.prices) {
    out.model.market.crops[crop_index(name)].tau = fit("price " + name, path);
  }
  for (const auto& [name, path] : inputs.costs) {
    out.model.costs.crops[crop_index(name)].theta = fit("cost " + name, path);
  }
  if (inputs.gas) out.model.energy.zeta = fit("gas", *inputs.gas);
  if (config_out.has_parent_path()) fs::create_directories(config_out.parent_path());
  io::save_config(out, config_out);
  log << "configuration with fitted trends written to " << config_out.string() << '\n';
  return kExitOk;
}

}  // namespace gwnash::app
