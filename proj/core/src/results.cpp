#include "gwnash/results.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "detail/text.hpp"
#include "gwnash/csv_io.hpp"
#include "gwnash/error.hpp"

namespace gwnash::io {

namespace {

using ordered_json = nlohmann::ordered_json;
using detail::format_double;
namespace fs = std::filesystem;

// JSON has no infinity or NaN; such values are written as null.
ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json numbers(const std::vector<double>& v) {
  ordered_json out = ordered_json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

ordered_json windows_json(const std::vector<std::vector<std::size_t>>& windows) {
  ordered_json out = ordered_json::array();
  for (const auto& w : windows) {
    ordered_json years = ordered_json::array();
    for (std::size_t t : w) years.push_back(t + 1);
    out.push_back(years);
  }
  return out;
}

}  // namespace

void write_panel_csv(const fs::path& path, const sim::SimulationResult& r) {
  std::string text = "agent,year,revenue,extraction_cost,production_cost,net,pumped_m3\n";
  for (std::size_t t = 0; t < r.num_years; ++t) {
    for (std::size_t i = 0; i < r.num_agents; ++i) {
      const auto& a = r.at(i, t);
      text += std::to_string(i + 1) + ',' + std::to_string(t + 1) + ',' + format_double(a.revenue) +
              ',' + format_double(a.extraction_cost) + ',' + format_double(a.production_cost) + ',' +
              format_double(a.net) + ',' + format_double(a.pumped) + '\n';
    }
  }
  detail::write_file(path, text);
}

void write_heads_csv(const fs::path& path, const sim::SimulationResult& r) {
  std::string text = "year,boundary";
  for (std::size_t i = 0; i < r.num_agents; ++i) text += ",agent_" + std::to_string(i + 1);
  text += '\n';
  for (std::size_t t = 0; t < r.heads.size(); ++t) {
    const auto& s = r.heads[t];
    text += std::to_string(t) + ',' + format_double(s.boundary_head);
    for (double g : s.heads) text += ',' + format_double(g);
    text += '\n';
  }
  detail::write_file(path, text);
}

std::string report_to_json(const RunRecord& rec, const sim::SimulationResult& result) {
  const auto& cfg = rec.config;
  ordered_json root;
  root["command"] = rec.command;
  root["seed"] = cfg.relaxation.seed;

  const auto& rc = cfg.relaxation;
  const auto& v = cfg.verify;
  root["hyperparameters"] = {
      {"relaxation",
       {{"eta", rc.eta},
        {"epsilon", rc.epsilon},
        {"max_iters", rc.max_iters},
        {"br_grid", rc.br_grid},
        {"br_sweeps", rc.br_sweeps},
        {"penalty_init", rc.penalty_init},
        {"penalty_growth", rc.penalty_growth},
        {"threads", rc.threads}}},
      {"verify",
       {{"deviation_grid", v.deviation_grid},
        {"restarts", v.restarts},
        {"seed", v.seed},
        {"certify_tolerance", v.certify_tolerance}}}};
  root["scenario"] = cfg.scenario.name;

  if (rec.lema) {
    ordered_json limits = ordered_json::array();
    for (const auto& row : rec.lema->limits) limits.push_back(numbers(row));
    root["lema"] = {{"fraction", rec.lema->fraction},
                    {"windows", windows_json(rec.lema->windows)},
                    {"limits_m3", limits}};
  } else {
    root["lema"] = nullptr;
  }

  if (rec.equilibrium) {
    const auto& e = *rec.equilibrium;
    root["equilibrium"] = {{"converged", e.converged},
                           {"iterations", e.iterations},
                           {"residual", number(e.residual)},
                           {"psi", number(e.psi)},
                           {"feasible", e.feasible},
                           {"violations_m3", numbers(e.violations)},
                           {"penalty_weight", number(e.penalty_weight)},
                           {"residual_history", numbers(e.residual_history)}};
  } else {
    root["equilibrium"] = nullptr;
  }
  if (rec.certification) {
    const auto& c = *rec.certification;
    root["certification"] = {{"certified", c.certified},
                             {"improvements", numbers(c.improvements)},
                             {"relative_improvements", numbers(c.relative_improvements)}};
  } else {
    root["certification"] = nullptr;
  }

  double aggregate = 0.0;
  for (double u : result.utilities) aggregate += u;
  root["utilities"] = numbers(result.utilities);
  root["aggregate_utility"] = number(aggregate);
  std::vector<double> pumped(result.num_agents, 0.0);
  for (std::size_t i = 0; i < result.num_agents; ++i) {
    for (std::size_t t = 0; t < result.num_years; ++t) pumped[i] += result.at(i, t).pumped;
  }
  root["pumped_m3"] = numbers(pumped);
  root["negative_lift_events"] = result.negative_lift_events;
  root["surrogate"] = {{"clamped", rec.surrogate.clamped},
                       {"out_of_domain", rec.surrogate.out_of_domain}};
  root["config"] = ordered_json::parse(config_to_json(cfg));
  return root.dump(2) + "\n";
}

void write_results(const fs::path& dir, const sim::JointStrategy& strategy,
                   const sim::SimulationResult& result, const RunRecord& record) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  save_strategy_csv(dir / "strategies.csv", strategy);
  write_panel_csv(dir / "panel.csv", result);
  write_heads_csv(dir / "heads.csv", result);
  detail::write_file(dir / "report.json", report_to_json(record, result));
}

StoredReport load_report(const fs::path& path) {
  const std::string text = detail::read_file(path);
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
  if (!root.is_object() || !root.contains("command") || !root.contains("config")) {
    throw InvalidInput(path.string() + ": not a run report");
  }
  StoredReport out;
  out.command = root.at("command").get<std::string>();
  out.config = parse_config(text, fs::absolute(path).parent_path());
  if (root.contains("lema") && root.at("lema").is_object()) out.lema_fraction = root.at("lema").at("fraction").get<double>();
  if (root.contains("utilities")) {
    for (const auto& u : root.at("utilities")) {
      out.utilities.push_back(u.is_null() ? std::nan("") : u.get<double>());
    }
  }
  return out;
}

}  // namespace gwnash::io
