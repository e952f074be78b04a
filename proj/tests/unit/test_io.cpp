#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "gwnash/app.hpp"
#include "gwnash/config.hpp"
#include "gwnash/csv_io.hpp"
#include "gwnash/error.hpp"
#include "gwnash/game.hpp"
#include "gwnash/plots.hpp"
#include "gwnash/results.hpp"

using namespace gwnash;
using gwnash::testing::TempDir;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

json baseline_json() {
  auto j = json::parse(slurp(gwnash::testing::data_dir() / "baseline.json"));
  j["weather_csv"] = (gwnash::testing::data_dir() / "weather_garden_city.csv").string();
  j["surrogate_csv"] = (gwnash::testing::data_dir() / "surrogate_default.csv").string();
  return j;
}

std::string invalid_message(const json& j) {
  try {
    io::parse_config(j.dump(), ".");
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return "";
}

// Tag balance and quoting, enough to catch malformed SVG output.
bool well_formed_xml(const std::string& doc) {
  std::vector<std::string> stack;
  std::size_t pos = 0;
  while ((pos = doc.find('<', pos)) != std::string::npos) {
    const std::size_t end = doc.find('>', pos);
    if (end == std::string::npos) return false;
    std::string tag = doc.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) return false;
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
    } else if (tag.back() != '/') {
      stack.push_back(tag.substr(0, tag.find_first_of(" \n\t")));
    }
  }
  return stack.empty();
}

struct SmallRun {
  sim::ScenarioInputs inputs;
  sim::JointStrategy strategy;
  sim::SimulationResult result;
};

SmallRun small_run() {
  gwnash::testing::TinyGame g;
  g.agents = 3;
  g.years = 4;
  SmallRun r;
  r.inputs = g.build();
  r.strategy = game::random_feasible_strategy(3, 2, 4, 5);
  r.result = sim::run_simulation(r.strategy, r.inputs);
  return r;
}

}  // namespace

TEST(Config, LoadsShippedBaseline) {
  const auto cfg = io::load_config(gwnash::testing::data_dir() / "baseline.json");
  ASSERT_EQ(cfg.model.areas.size(), 5u);
  EXPECT_NEAR(cfg.model.areas[0], 4856227.7, 0.01);
  EXPECT_NEAR(cfg.model.areas[4], 900 * 4046.8564224, 1e-6);
  EXPECT_EQ(cfg.model.hydro.initial_state.heads, (std::vector<double>{125.0, 113.0, 125.0, 113.0, 118.0}));
  EXPECT_EQ(cfg.model.hydro.initial_state.boundary_head, 118.8);
  EXPECT_NEAR(cfg.model.hydro.gamma, 0.3048, 1e-15);
  EXPECT_EQ(cfg.model.crop_names, (std::vector<std::string>{"corn", "sorghum", "wheat"}));
  EXPECT_EQ(cfg.model.network, hydro::default_five_agent_network());
  EXPECT_EQ(cfg.weather.size(), 20u);
  EXPECT_EQ(cfg.scenario.name, "baseline");
  EXPECT_EQ(cfg.relaxation.seed, 1u);
  EXPECT_NEAR(cfg.model.costs.crops[0].c0_init, 480.0 / 4046.8564224, 1e-15);
}

TEST(Config, FlowMatrixDefaultsForFiveAgents) {
  auto j = baseline_json();
  j["hydro"].erase("flow_matrix");
  EXPECT_EQ(io::parse_config(j.dump(), ".").model.network, hydro::default_five_agent_network());
}

TEST(Config, RejectsSelfFlow) {
  auto j = baseline_json();
  j["hydro"]["flow_matrix"][1][1] = 0.1;
  EXPECT_NE(invalid_message(j).find("self-flow"), std::string::npos) << invalid_message(j);
}

TEST(Config, RejectsUnknownKeyNamingIt) {
  auto j = baseline_json();
  j["energy"]["gas_prize"] = 3.0;
  const auto msg = invalid_message(j);
  EXPECT_NE(msg.find("gas_prize"), std::string::npos) << msg;
}

TEST(Config, RejectsMissingAndConflictingFields) {
  auto j = baseline_json();
  j["agents"][2].erase("initial_head_m");
  EXPECT_NE(invalid_message(j).find("initial_head_m"), std::string::npos) << invalid_message(j);

  j = baseline_json();
  j["agents"][0]["area_m2"] = 5.0e6;
  EXPECT_FALSE(invalid_message(j).empty());

  j = baseline_json();
  j["crops"][0]["price"]["tau_years"] = 0;
  EXPECT_FALSE(invalid_message(j).empty());

  j = baseline_json();
  j["scenario"] = "monsoon";
  EXPECT_NE(invalid_message(j).find("monsoon"), std::string::npos);

  EXPECT_THROW(io::parse_config("{not json", "."), InvalidInput);
  EXPECT_THROW(io::load_config("/nonexistent/config.json"), std::exception);
}

TEST(Config, UnitAlternativesAgree) {
  auto j = baseline_json();
  j["agents"][0].erase("area_acres");
  j["agents"][0]["area_m2"] = 1200 * 4046.8564224;
  j["hydro"].erase("gamma_mm_per_year");
  j["hydro"]["gamma_m_per_year"] = 0.3048;
  const auto a = io::parse_config(j.dump(), ".");
  const auto b = io::parse_config(baseline_json().dump(), ".");
  EXPECT_EQ(a.model.areas, b.model.areas);
  EXPECT_NEAR(a.model.hydro.gamma, b.model.hydro.gamma, 1e-15);
}

TEST(Config, SaveLoadRoundTrip) {
  TempDir dir("config");
  auto cfg = io::load_config(gwnash::testing::data_dir() / "baseline.json");
  cfg.scenario = scenarios::builtin_scenario("dry");
  cfg.model.market.crops[1].tau = 30.0;
  cfg.relaxation.eta = 0.2;
  cfg.model.discount = 0.97;
  io::save_config(cfg, dir.path() / "c.json");
  const auto back = io::load_config(dir.path() / "c.json");
  EXPECT_EQ(back, cfg);
  EXPECT_EQ(io::config_to_json(back), io::config_to_json(cfg));
}

TEST(WeatherCsv, LoadsAndRoundTrips) {
  TempDir dir("weather");
  const auto w = io::load_weather_csv(gwnash::testing::data_dir() / "weather_garden_city.csv");
  ASSERT_EQ(w.size(), 20u);
  for (std::size_t t = 1; t < w.size(); ++t) EXPECT_EQ(w[t].year, w[t - 1].year + 1);
  io::save_weather_csv(dir.path() / "w.csv", w);
  EXPECT_EQ(io::load_weather_csv(dir.path() / "w.csv"), w);
}

TEST(WeatherCsv, ErrorsNameTheLine) {
  TempDir dir("weather_bad");
  const std::string header = std::string(io::kWeatherHeader) + "\n";
  spit(dir.path() / "gap.csv", header + "2000,480,350,110,22,11,21,5\n2002,480,350,110,22,11,21,5\n");
  try {
    io::load_weather_csv(dir.path() / "gap.csv");
    FAIL() << "gap accepted";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  spit(dir.path() / "neg.csv", header + "2000,480,350,110,22,11,21,5\n2001,480,-350,110,22,11,21,5\n");
  try {
    io::load_weather_csv(dir.path() / "neg.csv");
    FAIL() << "negative precipitation accepted";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  spit(dir.path() / "cols.csv", "year,precip\n2000,1\n");
  EXPECT_THROW(io::load_weather_csv(dir.path() / "cols.csv"), InvalidInput);
  spit(dir.path() / "text.csv", header + "2000,abc,350,110,22,11,21,5\n");
  EXPECT_THROW(io::load_weather_csv(dir.path() / "text.csv"), InvalidInput);
  EXPECT_THROW(io::load_weather_csv(dir.path() / "missing.csv"), IoError);
}

TEST(SurrogateCsv, RoundTripIsExact) {
  TempDir dir("surrogate");
  const auto m = io::load_surrogate_csv(gwnash::testing::data_dir() / "surrogate_default.csv");
  EXPECT_EQ(m.num_crops(), 3u);
  io::save_surrogate_csv(dir.path() / "s.csv", m);
  EXPECT_EQ(io::load_surrogate_csv(dir.path() / "s.csv"), m);
}

TEST(TrainingCsv, RoundTripAndRefit) {
  TempDir dir("training");
  const auto t = io::load_training_csv(gwnash::testing::data_dir() / "surrogate_training.csv");
  EXPECT_EQ(t.crops, (std::vector<std::string>{"corn", "sorghum", "wheat"}));
  io::save_training_csv(dir.path() / "t.csv", t);
  const auto back = io::load_training_csv(dir.path() / "t.csv");
  EXPECT_EQ(back.crops, t.crops);
  for (const auto& c : t.crops) {
    ASSERT_EQ(back.rows.at(c).size(), t.rows.at(c).size());
    for (std::size_t r = 0; r < t.rows.at(c).size(); ++r) {
      EXPECT_EQ(back.rows.at(c)[r].features, t.rows.at(c)[r].features);
      EXPECT_EQ(back.rows.at(c)[r].observed, t.rows.at(c)[r].observed);
    }
  }
  // The shipped model is the fit of the shipped table.
  const auto shipped = io::load_surrogate_csv(gwnash::testing::data_dir() / "surrogate_default.csv");
  for (const auto& c : t.crops) {
    const auto fit = agronomy::fit_surrogate(t.rows.at(c), c);
    EXPECT_EQ(fit.model, shipped.crop(shipped.index_of(c)));
  }
}

TEST(TrendCsv, LoadsAndRejectsNonPositive) {
  TempDir dir("trend");
  spit(dir.path() / "ok.csv", "year,value\n2000,3.1\n2001,3.3\n");
  const auto s = io::load_trend_csv(dir.path() / "ok.csv");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].value, 3.3);
  spit(dir.path() / "bad.csv", "year,value\n2000,3.1\n2001,0\n");
  EXPECT_THROW(io::load_trend_csv(dir.path() / "bad.csv"), InvalidInput);
}

TEST(StrategyCsv, RoundTripIsBitIdentical) {
  TempDir dir("strategy");
  const auto x = game::random_feasible_strategy(5, 3, 20, 99);
  io::save_strategy_csv(dir.path() / "x.csv", x);
  EXPECT_EQ(io::load_strategy_csv(dir.path() / "x.csv"), x);
  const auto text = lines(slurp(dir.path() / "x.csv"));
  ASSERT_EQ(text.size(), 1u + 5 * 3 * 20);
  EXPECT_EQ(text[0], "agent,crop,year,x");
  EXPECT_EQ(text[1].substr(0, 6), "1,1,1,");
}

TEST(StrategyCsv, RejectsInfeasibleOrDuplicate) {
  TempDir dir("strategy_bad");
  spit(dir.path() / "dup.csv", "agent,crop,year,x\n1,1,1,0.5\n1,1,1,0.5\n1,2,1,0.5\n");
  EXPECT_THROW(io::load_strategy_csv(dir.path() / "dup.csv"), InvalidInput);
  spit(dir.path() / "sum.csv", "agent,crop,year,x\n1,1,1,0.7\n1,2,1,0.7\n");
  EXPECT_THROW(io::load_strategy_csv(dir.path() / "sum.csv"), InvalidInput);
}

TEST(Results, TablesHaveExpectedShapeAndResum) {
  TempDir dir("results");
  const auto run = small_run();
  io::RunRecord rec;
  rec.command = "simulate";
  rec.config = io::load_config(gwnash::testing::data_dir() / "baseline.json");
  io::write_results(dir.path(), run.strategy, run.result, rec);

  const auto panel = lines(slurp(dir.path() / "panel.csv"));
  ASSERT_EQ(panel.size(), 1u + 3 * 4);
  EXPECT_EQ(panel[0], "agent,year,revenue,extraction_cost,production_cost,net,pumped_m3");
  EXPECT_EQ(lines(slurp(dir.path() / "heads.csv")).size(), 1u + 5);
  EXPECT_EQ(lines(slurp(dir.path() / "strategies.csv")).size(), 1u + 3 * 2 * 4);

  std::vector<double> sums(3, 0.0);
  for (std::size_t r = 1; r < panel.size(); ++r) {
    std::vector<std::string> cells;
    std::stringstream ss(panel[r]);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    sums[std::stoul(cells[0]) - 1] += std::stod(cells[5]);
  }
  const auto report = json::parse(slurp(dir.path() / "report.json"));
  for (std::size_t i = 0; i < 3; ++i) {
    const double u = report["utilities"][i].get<double>();
    EXPECT_NEAR(sums[i], u, 1e-9 * std::abs(u));
    EXPECT_EQ(u, run.result.utilities[i]);
  }
  EXPECT_EQ(report["command"], "simulate");
}

TEST(Plots, WellFormedAndDeterministic) {
  TempDir a("plots_a"), b("plots_b");
  const auto run = small_run();
  const auto pa = io::render_plots(a.path(), run.strategy, run.inputs.crop_names, run.result);
  const auto pb = io::render_plots(b.path(), run.strategy, run.inputs.crop_names, run.result);
  ASSERT_EQ(pa.size(), 4u);
  for (std::size_t n = 0; n < pa.size(); ++n) {
    const auto text = slurp(pa[n]);
    EXPECT_TRUE(well_formed_xml(text)) << pa[n];
    EXPECT_NE(text.find("<svg"), std::string::npos);
    EXPECT_EQ(text, slurp(pb[n]));
  }
}

TEST(Plots, LemaPlotTicksAndEmptyChart) {
  TempDir dir("plots_lema");
  const std::vector<double> f{0.95, 0.90, 0.85, 0.80, 0.75, 0.70};
  const std::vector<double> u{5.0, 5.1, 5.2, 5.3, 5.2, 5.1};
  const auto text = slurp(io::render_lema_plot(dir.path(), f, u));
  EXPECT_TRUE(well_formed_xml(text));
  for (const char* tick : {">0.95<", ">0.90<", ">0.85<", ">0.80<", ">0.75<", ">0.70<"}) {
    EXPECT_NE(text.find(tick), std::string::npos) << tick;
  }
  io::Chart empty;
  empty.title = "nothing";
  const auto doc = io::render_svg(empty);
  EXPECT_TRUE(well_formed_xml(doc));
  EXPECT_NE(doc.find("no data"), std::string::npos);
}
