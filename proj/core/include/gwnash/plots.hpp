#pragma once

// Standalone SVG charts of a run. Output depends only on the inputs, so
// identical runs give byte-identical files.

#include <filesystem>
#include <string>
#include <vector>

#include "gwnash/sim.hpp"

namespace gwnash::io {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
  bool points_only = false;  // scatter
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::vector<double> x_ticks;  // empty: automatic
  double y_min = 0.0;           // fixed y range when y_min < y_max
  double y_max = 0.0;
};

/// One chart as a complete SVG document. A chart with no data points is
/// rendered as an empty frame with a "no data" note.
std::string render_svg(const Chart& chart);

/// Several charts stacked vertically in one document.
std::string render_svg_stack(const std::string& title, const std::vector<Chart>& panels);

/// strategies.svg, utilities.svg, heads.svg, pumped_vs_utility.svg.
/// Returns the written paths.
std::vector<std::filesystem::path> render_plots(const std::filesystem::path& dir,
                                                const sim::JointStrategy& strategy,
                                                const std::vector<std::string>& crop_names,
                                                const sim::SimulationResult& result);

/// lema_utility.svg: aggregate equilibrium utility against the LEMA
/// fraction, one x tick per fraction.
std::filesystem::path render_lema_plot(const std::filesystem::path& dir,
                                       const std::vector<double>& fractions,
                                       const std::vector<double>& aggregate_utility);

}  // namespace gwnash::io
