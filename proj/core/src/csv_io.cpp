#include "gwnash/csv_io.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <string_view>

#include "detail/text.hpp"
#include "gwnash/error.hpp"

namespace gwnash::io {

namespace {

using detail::CsvTable;
using detail::format_double;

std::vector<std::string_view> header_cells(const char* header) {
  return detail::split_commas(header);
}

constexpr std::array<agronomy::Channel, agronomy::kNumChannels> kChannels = {
    agronomy::Channel::kTranspiration, agronomy::Channel::kIrrigation,
    agronomy::Channel::kEvapotranspiration, agronomy::Channel::kSeasonPrecip,
    agronomy::Channel::kYield};

std::string join_row(std::initializer_list<std::string> cells) {
  std::string out;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    out += c;
    first = false;
  }
  out += '\n';
  return out;
}

}  // namespace

std::vector<agronomy::WeatherYear> load_weather_csv(const std::filesystem::path& path) {
  CsvTable csv(path);
  csv.expect_header(header_cells(kWeatherHeader));
  std::vector<agronomy::WeatherYear> out;
  out.reserve(csv.num_rows());
  for (std::size_t r = 0; r < csv.num_rows(); ++r) {
    const auto& line = csv.row(r);
    csv.expect_width(line);
    agronomy::WeatherYear w;
    w.year = static_cast<int>(csv.integer(line, 0));
    double* fields[] = {&w.precip_annual, &w.precip_summer, &w.precip_winter, &w.solar_summer,
                        &w.solar_winter,  &w.tmax_mean,     &w.tmin_mean};
    for (std::size_t c = 0; c < 7; ++c) {
      *fields[c] = csv.number(line, c + 1);
      if (!std::isfinite(*fields[c])) csv.fail(line, "non-finite value");
    }
    for (std::size_t c = 1; c <= 5; ++c) {
      if (*fields[c - 1] < 0.0) {
        csv.fail(line, "column '" + std::string(csv.header()[c]) + "' is negative");
      }
    }
    if (!out.empty() && w.year != out.back().year + 1) {
      csv.fail(line, "year " + std::to_string(w.year) + " does not follow " +
                         std::to_string(out.back().year) + " (series must be gap-free and ordered)");
    }
    try {
      w.validate();
    } catch (const InvalidInput& e) {
      csv.fail(line, e.what());
    }
    out.push_back(w);
  }
  if (out.empty()) throw InvalidInput(path.string() + ": no weather rows");
  return out;
}

void save_weather_csv(const std::filesystem::path& path,
                      const std::vector<agronomy::WeatherYear>& series) {
  std::string text = std::string(kWeatherHeader) + '\n';
  for (const auto& w : series) {
    text += join_row({std::to_string(w.year), format_double(w.precip_annual),
                      format_double(w.precip_summer), format_double(w.precip_winter),
                      format_double(w.solar_summer), format_double(w.solar_winter),
                      format_double(w.tmax_mean), format_double(w.tmin_mean)});
  }
  detail::write_file(path, text);
}

TrainingTable load_training_csv(const std::filesystem::path& path) {
  CsvTable csv(path);
  csv.expect_header(header_cells(kTrainingHeader));
  TrainingTable table;
  for (std::size_t r = 0; r < csv.num_rows(); ++r) {
    const auto& line = csv.row(r);
    csv.expect_width(line);
    const std::string crop(line.cells[0]);
    if (crop.empty()) csv.fail(line, "empty crop name");
    agronomy::TrainingRow row;
    for (std::size_t f = 0; f < agronomy::kNumFeatures; ++f) row.features[f] = csv.number(line, 1 + f);
    for (std::size_t c = 0; c < agronomy::kNumChannels; ++c) {
      row.observed.set(kChannels[c], csv.number(line, 1 + agronomy::kNumFeatures + c));
    }
    if (!table.rows.contains(crop)) table.crops.push_back(crop);
    table.rows[crop].push_back(row);
  }
  return table;
}

void save_training_csv(const std::filesystem::path& path, const TrainingTable& table) {
  std::string text = std::string(kTrainingHeader) + '\n';
  for (const auto& crop : table.crops) {
    for (const auto& row : table.rows.at(crop)) {
      text += crop;
      for (double f : row.features) text += ',' + format_double(f);
      for (auto c : kChannels) text += ',' + format_double(row.observed.get(c));
      text += '\n';
    }
  }
  detail::write_file(path, text);
}

agronomy::SurrogateModel load_surrogate_csv(const std::filesystem::path& path) {
  CsvTable csv(path);
  csv.expect_header({"crop", "channel", "term", "value"});

  std::map<std::string, std::size_t> term_index;
  for (std::size_t j = 0; j < agronomy::kNumTerms; ++j) term_index[agronomy::term_name(j)] = j;
  std::map<std::string, std::size_t> feature_index;
  for (std::size_t f = 0; f < agronomy::kNumFeatures; ++f) {
    feature_index[std::string(agronomy::kFeatureNames[f])] = f;
  }

  std::vector<agronomy::CropSurrogate> crops;
  std::vector<std::set<std::string>> seen;
  for (std::size_t r = 0; r < csv.num_rows(); ++r) {
    const auto& line = csv.row(r);
    csv.expect_width(line);
    const std::string crop(line.cells[0]);
    const std::string channel(line.cells[1]);
    const std::string term(line.cells[2]);
    const double value = csv.number(line, 3);

    std::size_t k = 0;
    while (k < crops.size() && crops[k].crop != crop) ++k;
    if (k == crops.size()) {
      agronomy::CropSurrogate s;
      s.crop = crop;
      crops.push_back(s);
      seen.emplace_back();
    }
    if (!seen[k].insert(channel + "/" + term).second) {
      csv.fail(line, "duplicate entry " + channel + "/" + term + " for crop '" + crop + "'");
    }

    if (channel == "domain_min" || channel == "domain_max") {
      const auto it = feature_index.find(term);
      if (it == feature_index.end()) csv.fail(line, "unknown feature '" + term + "'");
      (channel == "domain_min" ? crops[k].domain.lo : crops[k].domain.hi)[it->second] = value;
      continue;
    }
    std::size_t c = 0;
    while (c < agronomy::kNumChannels && agronomy::kChannelNames[c] != channel) ++c;
    if (c == agronomy::kNumChannels) csv.fail(line, "unknown channel '" + channel + "'");
    const auto it = term_index.find(term);
    if (it == term_index.end()) csv.fail(line, "unknown term '" + term + "'");
    if (!std::isfinite(value)) csv.fail(line, "non-finite coefficient");
    crops[k].coefficients[c][it->second] = value;
  }

  for (std::size_t k = 0; k < crops.size(); ++k) {
    std::size_t coeffs = 0;
    for (const auto& key : seen[k]) coeffs += key.starts_with("domain_") ? 0 : 1;
    if (coeffs != agronomy::kNumChannels * agronomy::kNumTerms) {
      throw InvalidInput(path.string() + ": crop '" + crops[k].crop + "' lists " +
                         std::to_string(coeffs) + " coefficients, expected " +
                         std::to_string(agronomy::kNumChannels * agronomy::kNumTerms));
    }
  }
  if (crops.empty()) throw InvalidInput(path.string() + ": no coefficients");
  return agronomy::SurrogateModel(std::move(crops));
}

void save_surrogate_csv(const std::filesystem::path& path, const agronomy::SurrogateModel& model) {
  std::string text = "crop,channel,term,value\n";
  for (const auto& s : model.crops()) {
    for (std::size_t c = 0; c < agronomy::kNumChannels; ++c) {
      for (std::size_t j = 0; j < agronomy::kNumTerms; ++j) {
        text += join_row({s.crop, std::string(agronomy::kChannelNames[c]), agronomy::term_name(j),
                          format_double(s.coefficients[c][j])});
      }
    }
    for (std::size_t f = 0; f < agronomy::kNumFeatures; ++f) {
      if (std::isfinite(s.domain.lo[f])) {
        text += join_row({s.crop, "domain_min", std::string(agronomy::kFeatureNames[f]),
                          format_double(s.domain.lo[f])});
      }
      if (std::isfinite(s.domain.hi[f])) {
        text += join_row({s.crop, "domain_max", std::string(agronomy::kFeatureNames[f]),
                          format_double(s.domain.hi[f])});
      }
    }
  }
  detail::write_file(path, text);
}

std::vector<econ::TrendPoint> load_trend_csv(const std::filesystem::path& path) {
  CsvTable csv(path);
  csv.expect_header({"year", "value"});
  std::vector<econ::TrendPoint> out;
  for (std::size_t r = 0; r < csv.num_rows(); ++r) {
    const auto& line = csv.row(r);
    csv.expect_width(line);
    econ::TrendPoint p;
    p.t = csv.number(line, 0);
    p.value = csv.number(line, 1);
    if (!(p.value > 0.0)) csv.fail(line, "value must be > 0");
    out.push_back(p);
  }
  return out;
}

void save_strategy_csv(const std::filesystem::path& path, const sim::JointStrategy& x) {
  std::string text = "agent,crop,year,x\n";
  for (std::size_t i = 0; i < x.num_agents(); ++i) {
    for (std::size_t k = 0; k < x.num_crops(); ++k) {
      for (std::size_t t = 0; t < x.num_years(); ++t) {
        text += join_row({std::to_string(i + 1), std::to_string(k + 1), std::to_string(t + 1),
                          format_double(x.at(i, k, t))});
      }
    }
  }
  detail::write_file(path, text);
}

sim::JointStrategy load_strategy_csv(const std::filesystem::path& path) {
  CsvTable csv(path);
  csv.expect_header({"agent", "crop", "year", "x"});
  struct Entry {
    long long i, k, t;
    double x;
  };
  std::vector<Entry> entries;
  long long ni = 0, nk = 0, nt = 0;
  for (std::size_t r = 0; r < csv.num_rows(); ++r) {
    const auto& line = csv.row(r);
    csv.expect_width(line);
    Entry e{csv.integer(line, 0), csv.integer(line, 1), csv.integer(line, 2), csv.number(line, 3)};
    if (e.i < 1 || e.k < 1 || e.t < 1) csv.fail(line, "indices are 1-based");
    ni = std::max(ni, e.i);
    nk = std::max(nk, e.k);
    nt = std::max(nt, e.t);
    entries.push_back(e);
  }
  if (static_cast<long long>(entries.size()) != ni * nk * nt) {
    throw InvalidInput(path.string() + ": expected " + std::to_string(ni * nk * nt) +
                       " rows for " + std::to_string(ni) + " agents x " + std::to_string(nk) +
                       " crops x " + std::to_string(nt) + " years, found " +
                       std::to_string(entries.size()));
  }
  sim::JointStrategy x(static_cast<std::size_t>(ni), static_cast<std::size_t>(nk),
                       static_cast<std::size_t>(nt), std::nan(""));
  for (const auto& e : entries) {
    double& slot = x.at(e.i - 1, e.k - 1, e.t - 1);
    if (!std::isnan(slot)) {
      throw InvalidInput(path.string() + ": duplicate entry for agent " + std::to_string(e.i) +
                         ", crop " + std::to_string(e.k) + ", year " + std::to_string(e.t));
    }
    slot = e.x;
  }
  x.validate();
  return x;
}

}  // namespace gwnash::io
