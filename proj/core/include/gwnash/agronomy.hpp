#pragma once

// Crop-response surrogate: a full quadratic polynomial in yearly weather
// features per crop and output channel, fitted by least squares. Stands in
// for a process-based crop model; soil effects live in the coefficients.

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gwnash::agronomy {

inline constexpr std::size_t kNumFeatures = 7;
inline constexpr std::size_t kNumTerms = 1 + kNumFeatures + kNumFeatures * (kNumFeatures + 1) / 2;
inline constexpr std::size_t kNumChannels = 5;

using FeatureVector = std::array<double, kNumFeatures>;
using TermVector = std::array<double, kNumTerms>;

inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "precip_annual", "precip_summer", "precip_winter", "solar_summer",
    "solar_winter",  "tmax_mean",     "tmin_mean"};

enum class Channel : std::size_t {
  kTranspiration = 0,
  kIrrigation = 1,
  kEvapotranspiration = 2,
  kSeasonPrecip = 3,
  kYield = 4,
};

inline constexpr std::array<std::string_view, kNumChannels> kChannelNames = {"tr", "ir", "et", "p",
                                                                             "yield"};

/// Yearly weather summary. Precipitation in mm; solar radiation as the
/// seasonal mean of daily totals (MJ/m²/day); temperatures in °C.
/// Summer = Apr-Sep, winter = Oct-Mar.
struct WeatherYear {
  int year = 0;
  double precip_annual = 0.0;
  double precip_summer = 0.0;
  double precip_winter = 0.0;
  double solar_summer = 0.0;
  double solar_winter = 0.0;
  double tmax_mean = 0.0;
  double tmin_mean = 0.0;

  FeatureVector features() const;
  /// Throws InvalidInput on negative precipitation or seasonal totals
  /// exceeding the annual total.
  void validate() const;
  bool operator==(const WeatherYear&) const = default;
};

/// Per-crop, per-year outputs. Water quantities in mm over the crop's
/// season, yield in bushels/acre.
struct CropResponse {
  double transpiration = 0.0;       // TR
  double irrigation = 0.0;          // IR
  double evapotranspiration = 0.0;  // ET
  double season_precip = 0.0;       // P_k
  double yield = 0.0;               // y_k

  double get(Channel c) const;
  void set(Channel c, double v);
  bool operator==(const CropResponse&) const = default;
};

/// Range of each feature seen during fitting; used to flag extrapolation.
struct FeatureDomain {
  FeatureVector lo;
  FeatureVector hi;

  static FeatureDomain unbounded();
  bool contains(const FeatureVector& f) const;
  bool operator==(const FeatureDomain&) const = default;
};

struct CropSurrogate {
  std::string crop;
  std::array<TermVector, kNumChannels> coefficients{};
  FeatureDomain domain = FeatureDomain::unbounded();

  bool operator==(const CropSurrogate&) const = default;
};

class SurrogateModel {
 public:
  SurrogateModel() = default;
  explicit SurrogateModel(std::vector<CropSurrogate> crops);

  std::size_t num_crops() const { return crops_.size(); }
  const CropSurrogate& crop(std::size_t k) const;
  const std::vector<CropSurrogate>& crops() const { return crops_; }
  /// Index of the crop named `name`; throws InvalidInput when absent.
  std::size_t index_of(std::string_view name) const;

  bool operator==(const SurrogateModel&) const = default;

 private:
  std::vector<CropSurrogate> crops_;
};

/// Term order: 1, f_0..f_6, then f_a*f_b for a <= b in row-major order.
TermVector quadratic_terms(const FeatureVector& f);
/// Human-readable label of term `index` ("1", "tmax_mean",
/// "precip_annual*precip_summer", ...).
std::string term_name(std::size_t index);

struct SurrogateEvaluation {
  CropResponse response;
  bool clamped = false;        // some channel was negative, or ET raised to TR
  bool out_of_domain = false;  // a feature lies outside the fitted range
};

SurrogateEvaluation evaluate_surrogate(const SurrogateModel& model, const WeatherYear& weather,
                                       std::size_t crop);

struct TrainingRow {
  FeatureVector features{};
  CropResponse observed;
};

struct SurrogateFit {
  CropSurrogate model;
  std::array<double, kNumChannels> rmse{};
  bool ridge_fallback = false;
};

/// Per-channel ordinary least squares on the quadratic expansion. Falls
/// back to ridge regression (lambda = 1e-8 on the column-scaled design)
/// when the expanded design is rank deficient. Needs at least kNumTerms
/// rows.
SurrogateFit fit_surrogate(std::span<const TrainingRow> rows, std::string crop_name);

/// Annual evaporation (mm), assuming the seasonal share of evaporation
/// equals the seasonal share of precipitation:
///   E = P_annual * sum_k (ET_k - TR_k) / sum_k P_k
double estimate_evaporation(std::span<const CropResponse> responses, double precip_annual);

}  // namespace gwnash::agronomy
