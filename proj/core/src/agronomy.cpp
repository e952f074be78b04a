#include "gwnash/agronomy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gwnash/error.hpp"

namespace gwnash::agronomy {

namespace {

constexpr double kRidgeLambda = 1e-8;
constexpr double kSeasonSlack = 1e-6;

}  // namespace

FeatureVector WeatherYear::features() const {
  return {precip_annual, precip_summer, precip_winter, solar_summer,
          solar_winter,  tmax_mean,     tmin_mean};
}

void WeatherYear::validate() const {
  const std::string where = "weather year " + std::to_string(year) + ": ";
  for (const double v : features()) {
    if (!std::isfinite(v)) throw InvalidInput(where + "non-finite value");
  }
  if (precip_annual < 0.0 || precip_summer < 0.0 || precip_winter < 0.0) {
    throw InvalidInput(where + "negative precipitation");
  }
  if (precip_summer + precip_winter > precip_annual + kSeasonSlack) {
    throw InvalidInput(where + "seasonal precipitation exceeds annual total");
  }
}

double CropResponse::get(Channel c) const {
  switch (c) {
    case Channel::kTranspiration: return transpiration;
    case Channel::kIrrigation: return irrigation;
    case Channel::kEvapotranspiration: return evapotranspiration;
    case Channel::kSeasonPrecip: return season_precip;
    case Channel::kYield: return yield;
  }
  return 0.0;
}

void CropResponse::set(Channel c, double v) {
  switch (c) {
    case Channel::kTranspiration: transpiration = v; break;
    case Channel::kIrrigation: irrigation = v; break;
    case Channel::kEvapotranspiration: evapotranspiration = v; break;
    case Channel::kSeasonPrecip: season_precip = v; break;
    case Channel::kYield: yield = v; break;
  }
}

FeatureDomain FeatureDomain::unbounded() {
  FeatureDomain d;
  d.lo.fill(-std::numeric_limits<double>::infinity());
  d.hi.fill(std::numeric_limits<double>::infinity());
  return d;
}

bool FeatureDomain::contains(const FeatureVector& f) const {
  for (std::size_t a = 0; a < kNumFeatures; ++a) {
    if (f[a] < lo[a] || f[a] > hi[a]) return false;
  }
  return true;
}

SurrogateModel::SurrogateModel(std::vector<CropSurrogate> crops) : crops_(std::move(crops)) {
  for (const auto& c : crops_) {
    for (const auto& channel : c.coefficients) {
      for (double v : channel) {
        if (!std::isfinite(v)) throw InvalidInput("surrogate '" + c.crop + "': non-finite coefficient");
      }
    }
  }
}

const CropSurrogate& SurrogateModel::crop(std::size_t k) const {
  if (k >= crops_.size()) throw InvalidInput("unknown crop index " + std::to_string(k));
  return crops_[k];
}

std::size_t SurrogateModel::index_of(std::string_view name) const {
  for (std::size_t k = 0; k < crops_.size(); ++k) {
    if (crops_[k].crop == name) return k;
  }
  throw InvalidInput("surrogate model has no crop named '" + std::string(name) + "'");
}

TermVector quadratic_terms(const FeatureVector& f) {
  TermVector t{};
  std::size_t n = 0;
  t[n++] = 1.0;
  for (double v : f) t[n++] = v;
  for (std::size_t a = 0; a < kNumFeatures; ++a) {
    for (std::size_t b = a; b < kNumFeatures; ++b) t[n++] = f[a] * f[b];
  }
  return t;
}

std::string term_name(std::size_t index) {
  if (index == 0) return "1";
  if (index <= kNumFeatures) return std::string(kFeatureNames[index - 1]);
  std::size_t n = kNumFeatures + 1;
  for (std::size_t a = 0; a < kNumFeatures; ++a) {
    for (std::size_t b = a; b < kNumFeatures; ++b, ++n) {
      if (n == index) return std::string(kFeatureNames[a]) + "*" + std::string(kFeatureNames[b]);
    }
  }
  throw InvalidInput("term index " + std::to_string(index) + " out of range");
}

SurrogateEvaluation evaluate_surrogate(const SurrogateModel& model, const WeatherYear& weather,
                                       std::size_t crop) {
  const CropSurrogate& s = model.crop(crop);
  const FeatureVector f = weather.features();
  const TermVector terms = quadratic_terms(f);

  SurrogateEvaluation out;
  out.out_of_domain = !s.domain.contains(f);
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    double v = 0.0;
    for (std::size_t j = 0; j < kNumTerms; ++j) v += s.coefficients[c][j] * terms[j];
    if (v < 0.0) {
      v = 0.0;
      out.clamped = true;
    }
    out.response.set(static_cast<Channel>(c), v);
  }
  if (out.response.evapotranspiration < out.response.transpiration) {
    out.response.evapotranspiration = out.response.transpiration;
    out.clamped = true;
  }
  return out;
}

SurrogateFit fit_surrogate(std::span<const TrainingRow> rows, std::string crop_name) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  constexpr auto p = static_cast<Eigen::Index>(kNumTerms);
  if (n < p) {
    throw InvalidInput("fit_surrogate: need at least " + std::to_string(kNumTerms) +
                       " rows, got " + std::to_string(rows.size()));
  }

  Eigen::MatrixXd design(n, p);
  Eigen::MatrixXd targets(n, static_cast<Eigen::Index>(kNumChannels));
  SurrogateFit fit;
  fit.model.crop = std::move(crop_name);
  auto& domain = fit.model.domain;
  domain.lo.fill(std::numeric_limits<double>::infinity());
  domain.hi.fill(-std::numeric_limits<double>::infinity());

  for (Eigen::Index r = 0; r < n; ++r) {
    const TrainingRow& row = rows[static_cast<std::size_t>(r)];
    const TermVector terms = quadratic_terms(row.features);
    for (Eigen::Index j = 0; j < p; ++j) design(r, j) = terms[static_cast<std::size_t>(j)];
    for (std::size_t c = 0; c < kNumChannels; ++c) {
      targets(r, static_cast<Eigen::Index>(c)) = row.observed.get(static_cast<Channel>(c));
    }
    for (std::size_t a = 0; a < kNumFeatures; ++a) {
      domain.lo[a] = std::min(domain.lo[a], row.features[a]);
      domain.hi[a] = std::max(domain.hi[a], row.features[a]);
    }
  }
  if (!design.allFinite() || !targets.allFinite()) {
    throw InvalidInput("fit_surrogate: non-finite training value");
  }

  // Column equilibration: raw quadratic terms span ~10 orders of magnitude.
  Eigen::VectorXd scale = design.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < p; ++j) {
    if (scale(j) == 0.0) scale(j) = 1.0;
  }
  const Eigen::MatrixXd scaled = design * scale.cwiseInverse().asDiagonal();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  Eigen::MatrixXd beta;
  if (qr.rank() < p) {
    fit.ridge_fallback = true;
    Eigen::MatrixXd normal = scaled.transpose() * scaled;
    normal.diagonal().array() += kRidgeLambda;
    beta = normal.ldlt().solve(scaled.transpose() * targets);
  } else {
    beta = qr.solve(targets);
  }
  beta = scale.cwiseInverse().asDiagonal() * beta;

  const Eigen::MatrixXd residual = design * beta - targets;
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    for (Eigen::Index j = 0; j < p; ++j) {
      fit.model.coefficients[c][static_cast<std::size_t>(j)] = beta(j, col);
    }
    fit.rmse[c] = std::sqrt(residual.col(col).squaredNorm() / static_cast<double>(n));
  }
  return fit;
}

double estimate_evaporation(std::span<const CropResponse> responses, double precip_annual) {
  double season_precip = 0.0;
  double residual = 0.0;
  for (const auto& r : responses) {
    season_precip += r.season_precip;
    residual += r.evapotranspiration - r.transpiration;
  }
  if (!(season_precip > 0.0)) {
    throw InvalidInput("estimate_evaporation: total season precipitation must be > 0");
  }
  return precip_annual * residual / season_precip;
}

}  // namespace gwnash::agronomy
