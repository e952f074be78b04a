#pragma once

// CSV readers and writers for weather series, surrogate training tables,
// fitted surrogate models, trend histories and strategies. Numbers are
// written with 17 significant digits so every file re-loads bit-exactly.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gwnash/agronomy.hpp"
#include "gwnash/econ.hpp"
#include "gwnash/sim.hpp"

namespace gwnash::io {

inline constexpr const char* kWeatherHeader =
    "year,precip_annual_mm,precip_summer_mm,precip_winter_mm,solar_summer,solar_winter,"
    "tmax_mean_c,tmin_mean_c";

/// Ordered, gap-free yearly series. Errors name the offending line.
std::vector<agronomy::WeatherYear> load_weather_csv(const std::filesystem::path& path);
void save_weather_csv(const std::filesystem::path& path,
                      const std::vector<agronomy::WeatherYear>& series);

/// crop, the seven weather feature columns, then tr_mm, ir_mm, et_mm,
/// p_mm, yield_bu_acre. Rows are grouped by crop name in file order.
inline constexpr const char* kTrainingHeader =
    "crop,precip_annual_mm,precip_summer_mm,precip_winter_mm,solar_summer,solar_winter,"
    "tmax_mean_c,tmin_mean_c,tr_mm,ir_mm,et_mm,p_mm,yield_bu_acre";

struct TrainingTable {
  std::vector<std::string> crops;  // first-appearance order
  std::map<std::string, std::vector<agronomy::TrainingRow>> rows;
};

TrainingTable load_training_csv(const std::filesystem::path& path);
void save_training_csv(const std::filesystem::path& path, const TrainingTable& table);

/// crop,channel,term,value. channel is one of tr, ir, et, p, yield with
/// term a quadratic-term label, or domain_min / domain_max with term a
/// feature name. Every crop must list all coefficients.
agronomy::SurrogateModel load_surrogate_csv(const std::filesystem::path& path);
void save_surrogate_csv(const std::filesystem::path& path, const agronomy::SurrogateModel& model);

/// year,value with value > 0 (history for trend fitting).
std::vector<econ::TrendPoint> load_trend_csv(const std::filesystem::path& path);

/// agent,crop,year,x with 1-based indices, agent-major then crop then year.
void save_strategy_csv(const std::filesystem::path& path, const sim::JointStrategy& x);
sim::JointStrategy load_strategy_csv(const std::filesystem::path& path);

}  // namespace gwnash::io
