#include "gwnash/config.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <nlohmann/json.hpp>

#include "detail/text.hpp"
#include "gwnash/csv_io.hpp"
#include "gwnash/error.hpp"
#include "gwnash/units.hpp"

namespace gwnash::io {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

[[noreturn]] void fail(const std::string& what) { throw InvalidInput("config: " + what); }

// Reads one JSON object, remembering which keys were consumed so that
// leftovers can be reported as unknown.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(where() + " must be an object");
  }

  std::string where(const std::string& key = "") const {
    if (key.empty()) return path_.empty() ? "top level" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& get(const std::string& key) {
    if (!j_.contains(key)) fail(where(key) + " is required");
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number()) fail(where(key) + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(where(key) + " must be finite");
    return d;
  }

  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  // Absent or null -> nullopt.
  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    if (get(key).is_null()) return std::nullopt;
    return number(key);
  }

  long long integer(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number_integer()) fail(where(key) + " must be an integer");
    return v.get<long long>();
  }

  std::uint64_t unsigned_integer(const std::string& key) {
    const json& v = get(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
    fail(where(key) + " must be a non-negative integer");
  }

  std::string string(const std::string& key) {
    const json& v = get(key);
    if (!v.is_string()) fail(where(key) + " must be a string");
    return v.get<std::string>();
  }

  // Exactly one of two unit spellings; returns the value in SI.
  double either(const std::string& si_key, const std::string& alt_key, double alt_to_si) {
    const bool a = has(si_key), b = has(alt_key);
    if (a && b) fail(where() + ": give only one of '" + si_key + "' and '" + alt_key + "'");
    if (!a && !b) fail(where(si_key) + " (or '" + alt_key + "') is required");
    return a ? number(si_key) : number(alt_key) * alt_to_si;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.contains(it.key())) fail("unknown key '" + where(it.key()) + "'");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

fs::path resolve(const fs::path& base_dir, const std::string& p) {
  const fs::path path(p);
  if (path.is_absolute()) return path.lexically_normal();
  return fs::absolute(base_dir / path).lexically_normal();
}

std::string indexed(const std::string& name, std::size_t i) {
  return name + "[" + std::to_string(i) + "]";
}

scenarios::ScenarioSpec read_scenario(const json& j) {
  if (j.is_string()) {
    try {
      return scenarios::builtin_scenario(j.get<std::string>());
    } catch (const InvalidInput& e) {
      fail(std::string("scenario: ") + e.what());
    }
  }
  Reader r(j, "scenario");
  scenarios::ScenarioSpec s;
  if (r.has("base")) s = read_scenario(r.get("base"));
  if (r.has("name")) s.name = r.string("name");
  s.precip_summer_multiplier = r.number_or("precip_summer_multiplier", s.precip_summer_multiplier);
  s.precip_winter_multiplier = r.number_or("precip_winter_multiplier", s.precip_winter_multiplier);
  s.solar_summer_multiplier = r.number_or("solar_summer_multiplier", s.solar_summer_multiplier);
  s.solar_winter_multiplier = r.number_or("solar_winter_multiplier", s.solar_winter_multiplier);
  auto mode = [&](const std::string& key, scenarios::TrendMode fallback) {
    if (!r.has(key)) return fallback;
    try {
      return scenarios::trend_mode_from_string(r.string(key));
    } catch (const InvalidInput& e) {
      fail(r.where(key) + ": " + e.what());
    }
  };
  s.price_mode = mode("price_mode", s.price_mode);
  s.gas_mode = mode("gas_mode", s.gas_mode);
  s.cost_mode = mode("cost_mode", s.cost_mode);
  s.ir_efficiency_rate = r.number_or("ir_efficiency_rate", s.ir_efficiency_rate);
  if (r.has("lema_fractions")) {
    const json& f = r.get("lema_fractions");
    if (!f.is_array()) fail("scenario.lema_fractions must be an array");
    s.lema_fractions.clear();
    for (const auto& v : f) {
      if (!v.is_number()) fail("scenario.lema_fractions must hold numbers");
      s.lema_fractions.push_back(v.get<double>());
    }
  }
  if (r.has("horizon")) s.horizon = static_cast<int>(r.integer("horizon"));
  r.finish();
  return s;
}

template <class F>
void wrap(const std::string& where, F&& f) {
  try {
    f();
  } catch (const InvalidInput& e) {
    fail(where + ": " + e.what());
  }
}

json qbar_to_json(double q) { return std::isinf(q) ? json(nullptr) : json(q); }

json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

RunConfig parse_config(const std::string& text, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("JSON parse error: ") + e.what());
  }
  // A previous run's report.json carries its configuration.
  if (root.is_object() && root.contains("config") && root.contains("seed") &&
      root.contains("hyperparameters")) {
    root = json(root.at("config"));
  }

  Reader top(root, "");
  RunConfig cfg;
  auto& m = cfg.model;

  const json& agents = top.get("agents");
  if (!agents.is_array() || agents.empty()) fail("agents must be a non-empty array");
  const std::size_t n = agents.size();
  m.hydro.initial_state.heads.resize(n);
  m.energy.surface_elevation.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Reader a(agents[i], indexed("agents", i));
    const double area = a.either("area_m2", "area_acres", units::kSquareMetersPerAcre);
    if (!(area > 0.0)) fail(a.where("area") + " must be > 0");
    m.areas.push_back(area);
    m.hydro.initial_state.heads[i] = a.number("initial_head_m");
    m.energy.surface_elevation[i] =
        a.either("surface_elevation_m", "surface_elevation_ft", units::kMetersPerFoot);
    a.finish();
  }

  {
    Reader h(top.get("hydro"), "hydro");
    m.hydro.initial_state.boundary_head = h.number("boundary_head_m");
    m.hydro.initial_state.year = 0;
    m.hydro.gamma = h.either("gamma_m_per_year", "gamma_mm_per_year", units::kMetersPerMillimeter);
    if (!(m.hydro.gamma >= 0.0)) fail("hydro.gamma must be >= 0");
    if (h.has("flow_matrix")) {
      const json& rows = h.get("flow_matrix");
      if (!rows.is_array() || rows.size() != n + 1) {
        fail("hydro.flow_matrix must have " + std::to_string(n + 1) + " rows (boundary first)");
      }
      std::vector<double> a;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].is_array() || rows[r].size() != n + 1) {
          fail(indexed("hydro.flow_matrix", r) + " must have " + std::to_string(n + 1) + " entries");
        }
        for (const auto& v : rows[r]) {
          if (!v.is_number()) fail(indexed("hydro.flow_matrix", r) + " must hold numbers");
          a.push_back(v.get<double>());
        }
      }
      wrap("hydro.flow_matrix", [&] { m.network = hydro::FlowNetwork(n, std::move(a)); });
    } else {
      if (n != 5) fail("hydro.flow_matrix is required unless there are exactly 5 agents");
      m.network = hydro::default_five_agent_network();
    }
    h.finish();
  }

  const json& crops = top.get("crops");
  if (!crops.is_array() || crops.empty()) fail("crops must be a non-empty array");
  for (std::size_t k = 0; k < crops.size(); ++k) {
    Reader c(crops[k], indexed("crops", k));
    const std::string name = c.string("name");
    for (const auto& prev : m.crop_names) {
      if (prev == name) fail(c.where("name") + ": duplicate crop '" + name + "'");
    }
    m.crop_names.push_back(name);

    Reader p(c.get("price"), c.where("price"));
    econ::CropMarket market;
    market.p0_init = p.number("p0_per_bushel");
    market.pinf_init = p.number("pinf_per_bushel");
    const auto qbar = p.optional_number("qbar_bushels");
    market.qbar = qbar ? *qbar : std::numeric_limits<double>::infinity();
    market.tau = p.optional_number("tau_years");
    if (market.tau && *market.tau == 0.0) fail(p.where("tau_years") + " must be non-zero (null = flat)");
    p.finish();
    m.market.crops.push_back(market);

    Reader q(c.get("cost"), c.where("cost"));
    econ::CropCost cost;
    cost.c0_init = q.either("c0_per_m2", "c0_per_acre", 1.0 / units::kSquareMetersPerAcre);
    cost.cinf_init = q.either("cinf_per_m2", "cinf_per_acre", 1.0 / units::kSquareMetersPerAcre);
    cost.abar = q.either("abar_m2", "abar_acres", units::kSquareMetersPerAcre);
    cost.theta = q.optional_number("theta_years");
    if (cost.theta && *cost.theta == 0.0) fail(q.where("theta_years") + " must be non-zero (null = flat)");
    q.finish();
    m.costs.crops.push_back(cost);
    c.finish();
  }
  wrap("crops", [&] {
    m.market.validate();
    m.costs.validate();
  });

  {
    Reader e(top.get("energy"), "energy");
    m.energy.gas_per_lift = e.number("gas_per_lift");
    m.energy.pump_efficiency = e.number("pump_efficiency");
    m.energy.gauge_pressure_psi = e.number("gauge_pressure_psi");
    m.energy.gas_price_init = e.number("gas_price");
    m.energy.zeta = e.optional_number("zeta_years");
    if (m.energy.zeta && *m.energy.zeta == 0.0) fail("energy.zeta_years must be non-zero (null = flat)");
    e.finish();
    wrap("energy", [&] { m.energy.validate(); });
  }

  cfg.weather_csv = resolve(base_dir, top.string("weather_csv"));
  cfg.surrogate_csv = resolve(base_dir, top.string("surrogate_csv"));
  m.discount = top.number_or("discount", 1.0);
  if (!(m.discount > 0.0 && m.discount <= 1.0)) fail("discount must lie in (0, 1]");

  if (top.has("scenario")) cfg.scenario = read_scenario(top.get("scenario"));
  wrap("scenario", [&] { cfg.scenario.validate(); });

  auto& rc = cfg.relaxation;
  if (top.has("relaxation")) {
    Reader r(top.get("relaxation"), "relaxation");
    rc.eta = r.number_or("eta", rc.eta);
    rc.epsilon = r.number_or("epsilon", rc.epsilon);
    if (r.has("max_iters")) rc.max_iters = static_cast<int>(r.integer("max_iters"));
    rc.br_grid = r.number_or("br_grid", rc.br_grid);
    if (r.has("br_sweeps")) rc.br_sweeps = static_cast<int>(r.integer("br_sweeps"));
    rc.penalty_init = r.number_or("penalty_init", rc.penalty_init);
    rc.penalty_growth = r.number_or("penalty_growth", rc.penalty_growth);
    if (r.has("threads")) rc.threads = static_cast<int>(r.integer("threads"));
    r.finish();
  }
  if (top.has("seed")) rc.seed = top.unsigned_integer("seed");
  wrap("relaxation", [&] { rc.validate(); });

  auto& v = cfg.verify;
  if (top.has("verify")) {
    Reader r(top.get("verify"), "verify");
    v.deviation_grid = r.number_or("deviation_grid", v.deviation_grid);
    if (r.has("restarts")) v.restarts = static_cast<int>(r.integer("restarts"));
    if (r.has("seed")) v.seed = r.unsigned_integer("seed");
    v.certify_tolerance = r.number_or("certify_tolerance", v.certify_tolerance);
    r.finish();
  }
  if (!(v.deviation_grid > 0.0 && v.deviation_grid <= 0.5)) fail("verify.deviation_grid must lie in (0, 0.5]");
  if (v.restarts < 0) fail("verify.restarts must be >= 0");
  if (!(v.certify_tolerance >= 0.0)) fail("verify.certify_tolerance must be >= 0");
  v.br_grid = rc.br_grid;
  v.br_sweeps = rc.br_sweeps;

  if (top.has("output_dir")) cfg.output_dir = resolve(base_dir, top.string("output_dir"));
  if (top.has("strategy_csv")) cfg.strategy_csv = resolve(base_dir, top.string("strategy_csv"));
  top.finish();

  // Referenced data files, then a full resolution of the scenario so every
  // downstream invariant is checked at load time.
  cfg.weather = load_weather_csv(cfg.weather_csv);
  m.surrogate = load_surrogate_csv(cfg.surrogate_csv);
  for (const auto& name : m.crop_names) {
    wrap("surrogate_csv", [&] { (void)m.surrogate.index_of(name); });
  }
  wrap("model", [&] { (void)scenarios::apply_scenario(cfg.weather, m, cfg.scenario); });
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  const fs::path abs = fs::absolute(path);
  return parse_config(detail::read_file(abs), abs.parent_path());
}

std::string config_to_json(const RunConfig& cfg) {
  const auto& m = cfg.model;
  ordered_json root;

  ordered_json agents = ordered_json::array();
  for (std::size_t i = 0; i < m.areas.size(); ++i) {
    agents.push_back({{"area_m2", m.areas[i]},
                      {"initial_head_m", m.hydro.initial_state.heads[i]},
                      {"surface_elevation_m", m.energy.surface_elevation[i]}});
  }
  root["agents"] = agents;

  ordered_json rows = ordered_json::array();
  const std::size_t nodes = m.network.num_nodes();
  for (std::size_t a = 0; a < nodes; ++a) {
    ordered_json row = ordered_json::array();
    for (std::size_t b = 0; b < nodes; ++b) row.push_back(m.network.coeff(a, b));
    rows.push_back(row);
  }
  root["hydro"] = {{"boundary_head_m", m.hydro.initial_state.boundary_head},
                   {"gamma_m_per_year", m.hydro.gamma},
                   {"flow_matrix", rows}};

  ordered_json crops = ordered_json::array();
  for (std::size_t k = 0; k < m.crop_names.size(); ++k) {
    const auto& p = m.market.crops[k];
    const auto& c = m.costs.crops[k];
    ordered_json price = {{"p0_per_bushel", p.p0_init},
                          {"pinf_per_bushel", p.pinf_init},
                          {"qbar_bushels", qbar_to_json(p.qbar)},
                          {"tau_years", optional_to_json(p.tau)}};
    ordered_json cost = {{"c0_per_m2", c.c0_init},
                         {"cinf_per_m2", c.cinf_init},
                         {"abar_m2", c.abar},
                         {"theta_years", optional_to_json(c.theta)}};
    crops.push_back({{"name", m.crop_names[k]}, {"price", price}, {"cost", cost}});
  }
  root["crops"] = crops;

  root["energy"] = {{"gas_per_lift", m.energy.gas_per_lift},
                    {"pump_efficiency", m.energy.pump_efficiency},
                    {"gauge_pressure_psi", m.energy.gauge_pressure_psi},
                    {"gas_price", m.energy.gas_price_init},
                    {"zeta_years", optional_to_json(m.energy.zeta)}};
  root["weather_csv"] = cfg.weather_csv.string();
  root["surrogate_csv"] = cfg.surrogate_csv.string();
  root["discount"] = m.discount;

  const auto& s = cfg.scenario;
  root["scenario"] = {{"name", s.name},
                      {"precip_summer_multiplier", s.precip_summer_multiplier},
                      {"precip_winter_multiplier", s.precip_winter_multiplier},
                      {"solar_summer_multiplier", s.solar_summer_multiplier},
                      {"solar_winter_multiplier", s.solar_winter_multiplier},
                      {"price_mode", std::string(scenarios::to_string(s.price_mode))},
                      {"gas_mode", std::string(scenarios::to_string(s.gas_mode))},
                      {"cost_mode", std::string(scenarios::to_string(s.cost_mode))},
                      {"ir_efficiency_rate", s.ir_efficiency_rate},
                      {"lema_fractions", s.lema_fractions},
                      {"horizon", s.horizon}};

  const auto& r = cfg.relaxation;
  root["relaxation"] = {{"eta", r.eta},
                        {"epsilon", r.epsilon},
                        {"max_iters", r.max_iters},
                        {"br_grid", r.br_grid},
                        {"br_sweeps", r.br_sweeps},
                        {"penalty_init", r.penalty_init},
                        {"penalty_growth", r.penalty_growth},
                        {"threads", r.threads}};
  const auto& v = cfg.verify;
  root["verify"] = {{"deviation_grid", v.deviation_grid},
                    {"restarts", v.restarts},
                    {"seed", v.seed},
                    {"certify_tolerance", v.certify_tolerance}};
  root["seed"] = r.seed;
  if (!cfg.output_dir.empty()) root["output_dir"] = cfg.output_dir.string();
  if (!cfg.strategy_csv.empty()) root["strategy_csv"] = cfg.strategy_csv.string();
  return root.dump(2) + "\n";
}

void save_config(const RunConfig& config, const fs::path& path) {
  detail::write_file(path, config_to_json(config));
}

}  // namespace gwnash::io
