#pragma once

// Shared test helpers: a portable random stream, small hand-built scenarios
// and paths to the shipped data.

#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "gwnash/config.hpp"
#include "gwnash/hydro.hpp"
#include "gwnash/sim.hpp"
#include "gwnash/units.hpp"

namespace gwnash::testing {

inline std::filesystem::path data_dir() { return GWNASH_DATA_DIR; }
inline std::filesystem::path fixture_dir() { return GWNASH_FIXTURE_DIR; }

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  // (gen >> 11) * 2^-53 keeps the stream identical across standard libraries.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * n) % n; }

 private:
  std::mt19937_64 gen_;
};

/// Random symmetric network with every agent row sum <= `max_row`. With
/// `closed` the boundary coefficients are zero.
inline hydro::FlowNetwork random_network(Rng& rng, std::size_t n, bool closed, double max_row = 0.9) {
  const std::size_t m = n + 1;
  std::vector<double> a(m * m, 0.0);
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = p + 1; q < m; ++q) {
      if (closed && p == 0) continue;
      const double v = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.0, 1.0);
      a[p * m + q] = a[q * m + p] = v;
    }
  }
  double worst = 0.0;
  for (std::size_t p = 1; p < m; ++p) {
    double s = 0.0;
    for (std::size_t q = 0; q < m; ++q) s += a[p * m + q];
    worst = std::max(worst, s);
  }
  if (worst > max_row) {
    for (double& v : a) v *= max_row / worst;
  }
  return hydro::FlowNetwork(n, a);
}

/// Hand-built inputs with identical crop responses every year. Defaults:
/// two summer crops, flat prices and costs, weak coupling.
struct TinyGame {
  std::size_t agents = 2;
  int years = 1;
  std::vector<agronomy::CropResponse> responses = {
      {400.0, 400.0, 500.0, 300.0, 200.0},  // corn
      {330.0, 200.0, 420.0, 280.0, 140.0},  // sorghum
  };
  std::vector<econ::CropMarket> market = {{4.0, 2.5, 3.0e5, {}}, {3.15, 3.15, std::numeric_limits<double>::infinity(), {}}};
  std::vector<econ::CropCost> costs = {
      {units::per_acre_to_per_m2(500.0), units::per_acre_to_per_m2(300.0), units::acres_to_m2(200.0), {}},
      {units::per_acre_to_per_m2(300.0), units::per_acre_to_per_m2(200.0), units::acres_to_m2(200.0), {}},
  };
  double area_acres = 1000.0;
  double head = 120.0;
  double surface = 200.0;
  double replenishment = 0.05;
  double network_coeff = 0.05;

  sim::ScenarioInputs build() const {
    sim::ScenarioInputs in;
    in.horizon = years;
    for (std::size_t k = 0; k < responses.size(); ++k) in.crop_names.push_back("crop" + std::to_string(k));
    in.areas.assign(agents, units::acres_to_m2(area_acres));
    const std::size_t m = agents + 1;
    std::vector<double> a(m * m, 0.0);
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = 0; q < m; ++q) {
        if (p != q) a[p * m + q] = network_coeff / static_cast<double>(m);
      }
    }
    in.network = hydro::FlowNetwork(agents, a);
    in.hydro.gamma = 0.3048;
    in.hydro.initial_state.heads.assign(agents, head);
    in.hydro.initial_state.boundary_head = head;
    in.crop_responses.assign(static_cast<std::size_t>(years), responses);
    in.market.crops = market;
    in.costs.crops = costs;
    in.energy.gas_per_lift = 5.92e-5;
    in.energy.pump_efficiency = 0.75;
    in.energy.gauge_pressure_psi = 30.0;
    in.energy.gas_price_init = 6.5;
    in.energy.surface_elevation.assign(agents, surface);
    in.replenishment.assign(static_cast<std::size_t>(years), replenishment);
    in.discount = 1.0;
    in.validate();
    return in;
  }
};

/// Unique scratch directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("gwnash_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace gwnash::testing
