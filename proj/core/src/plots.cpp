#include "gwnash/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "detail/text.hpp"
#include "gwnash/error.hpp"

namespace gwnash::io {

namespace {

namespace fs = std::filesystem;

constexpr double kWidth = 720.0;
constexpr double kPanelHeight = 300.0;
constexpr double kLeft = 80.0, kRight = 150.0, kTop = 40.0, kBottom = 50.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string coord(double v) { return fmt("%.2f", v); }

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double nice_step(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  const double m = r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0;
  return m * mag;
}

std::string tick_label(double v, double step) {
  if (std::abs(v) < step * 1e-9) v = 0.0;
  const int decimals = step >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log10(step) - 1e-9));
  char f[16];
  std::snprintf(f, sizeof f, "%%.%df", std::min(decimals, 6));
  return fmt(f, v);
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool empty() const { return !(lo <= hi); }
  void pad() {
    if (empty()) return;
    if (hi == lo) {
      const double d = lo == 0.0 ? 1.0 : std::abs(lo) * 0.05;
      lo -= d;
      hi += d;
    }
  }
};

// Draws one chart inside the band [y0, y0 + kPanelHeight).
std::string panel(const Chart& c, double y0) {
  std::string s;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kPanelHeight - kTop - kBottom;
  const double px = kLeft, py = y0 + kTop;

  s += "<text x=\"" + coord(kLeft) + "\" y=\"" + coord(y0 + 24) +
       "\" font-size=\"15\" font-weight=\"bold\">" + escape(c.title) + "</text>\n";
  s += "<rect x=\"" + coord(px) + "\" y=\"" + coord(py) + "\" width=\"" + coord(plot_w) +
       "\" height=\"" + coord(plot_h) + "\" fill=\"none\" stroke=\"#333\"/>\n";

  Range xr, yr;
  for (const auto& se : c.series) {
    for (std::size_t j = 0; j < std::min(se.x.size(), se.y.size()); ++j) {
      if (std::isfinite(se.x[j]) && std::isfinite(se.y[j])) {
        xr.add(se.x[j]);
        yr.add(se.y[j]);
      }
    }
  }
  for (double t : c.x_ticks) xr.add(t);
  if (c.y_min < c.y_max) {
    yr.lo = c.y_min;
    yr.hi = c.y_max;
  }
  if (xr.empty() || yr.empty()) {
    s += "<text x=\"" + coord(px + plot_w / 2) + "\" y=\"" + coord(py + plot_h / 2) +
         "\" font-size=\"14\" text-anchor=\"middle\" fill=\"#777\">no data</text>\n";
    return s;
  }
  xr.pad();
  yr.pad();
  if (c.x_ticks.empty()) {
    const double span = xr.hi - xr.lo;
    xr.lo -= span * 0.02;
    xr.hi += span * 0.02;
  } else {
    const double span = xr.hi - xr.lo;
    xr.lo -= span * 0.05;
    xr.hi += span * 0.05;
  }
  if (!(c.y_min < c.y_max)) {
    const double span = yr.hi - yr.lo;
    yr.lo -= span * 0.05;
    yr.hi += span * 0.05;
  }

  auto sx = [&](double x) { return px + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto sy = [&](double y) { return py + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h; };

  // Axes and ticks.
  std::vector<double> xt = c.x_ticks;
  const double xstep = nice_step(xr.hi - xr.lo);
  if (xt.empty()) {
    for (double t = std::ceil(xr.lo / xstep) * xstep; t <= xr.hi + xstep * 1e-9; t += xstep) xt.push_back(t);
  }
  const double xlabel_step = c.x_ticks.empty() ? xstep : 0.01;
  for (double t : xt) {
    const double x = sx(t);
    s += "<line x1=\"" + coord(x) + "\" y1=\"" + coord(py + plot_h) + "\" x2=\"" + coord(x) +
         "\" y2=\"" + coord(py + plot_h + 5) + "\" stroke=\"#333\"/>\n";
    s += "<text x=\"" + coord(x) + "\" y=\"" + coord(py + plot_h + 18) +
         "\" font-size=\"11\" text-anchor=\"middle\">" + tick_label(t, xlabel_step) + "</text>\n";
  }
  const double ystep = nice_step(yr.hi - yr.lo);
  for (double t = std::ceil(yr.lo / ystep) * ystep; t <= yr.hi + ystep * 1e-9; t += ystep) {
    const double y = sy(t);
    s += "<line x1=\"" + coord(px - 5) + "\" y1=\"" + coord(y) + "\" x2=\"" + coord(px + plot_w) +
         "\" y2=\"" + coord(y) + "\" stroke=\"#ddd\"/>\n";
    s += "<text x=\"" + coord(px - 8) + "\" y=\"" + coord(y + 4) +
         "\" font-size=\"11\" text-anchor=\"end\">" + tick_label(t, ystep) + "</text>\n";
  }
  s += "<text x=\"" + coord(px + plot_w / 2) + "\" y=\"" + coord(py + plot_h + 38) +
       "\" font-size=\"12\" text-anchor=\"middle\">" + escape(c.x_label) + "</text>\n";
  s += "<text transform=\"translate(" + coord(18) + "," + coord(py + plot_h / 2) +
       ") rotate(-90)\" font-size=\"12\" text-anchor=\"middle\">" + escape(c.y_label) + "</text>\n";

  // Data.
  for (std::size_t k = 0; k < c.series.size(); ++k) {
    const auto& se = c.series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    const std::size_t n = std::min(se.x.size(), se.y.size());
    if (se.points_only) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(se.x[j]) || !std::isfinite(se.y[j])) continue;
        s += "<circle cx=\"" + coord(sx(se.x[j])) + "\" cy=\"" + coord(sy(se.y[j])) +
             "\" r=\"5\" fill=\"" + color + "\"/>\n";
      }
    } else {
      std::string pts;
      for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(se.x[j]) || !std::isfinite(se.y[j])) continue;
        if (!pts.empty()) pts += ' ';
        pts += coord(sx(se.x[j])) + "," + coord(sy(se.y[j]));
      }
      if (!pts.empty()) {
        s += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"2\"" + (se.dashed ? " stroke-dasharray=\"6,4\"" : "") +
             " points=\"" + pts + "\"/>\n";
      }
    }
    const double ly = py + 12 + 18.0 * static_cast<double>(k);
    const double lx = px + plot_w + 12;
    if (se.points_only) {
      s += "<circle cx=\"" + coord(lx + 10) + "\" cy=\"" + coord(ly - 4) + "\" r=\"5\" fill=\"" +
           color + "\"/>\n";
    } else {
      s += "<line x1=\"" + coord(lx) + "\" y1=\"" + coord(ly - 4) + "\" x2=\"" + coord(lx + 20) +
           "\" y2=\"" + coord(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"" +
           (se.dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
    }
    s += "<text x=\"" + coord(lx + 26) + "\" y=\"" + coord(ly) + "\" font-size=\"11\">" +
         escape(se.name) + "</text>\n";
  }
  return s;
}

std::string document(const std::string& title, const std::string& body, double height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + coord(kWidth) + "\" height=\"" +
         coord(height) + "\" viewBox=\"0 0 " + coord(kWidth) + " " + coord(height) +
         "\" font-family=\"sans-serif\">\n<title>" + escape(title) + "</title>\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body + "</svg>\n";
}

std::vector<double> years(std::size_t from, std::size_t to) {
  std::vector<double> out;
  for (std::size_t t = from; t <= to; ++t) out.push_back(static_cast<double>(t));
  return out;
}

}  // namespace

std::string render_svg(const Chart& chart) {
  return document(chart.title, panel(chart, 0.0), kPanelHeight);
}

std::string render_svg_stack(const std::string& title, const std::vector<Chart>& panels) {
  std::string body;
  for (std::size_t p = 0; p < panels.size(); ++p) {
    body += panel(panels[p], kPanelHeight * static_cast<double>(p));
  }
  const double h = kPanelHeight * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
  if (panels.empty()) body = panel(Chart{title, "", "", {}, {}, 0.0, 0.0}, 0.0);
  return document(title, body, h);
}

std::vector<fs::path> render_plots(const fs::path& dir, const sim::JointStrategy& x,
                                   const std::vector<std::string>& crop_names,
                                   const sim::SimulationResult& r) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<fs::path> written;
  const std::size_t n = r.num_agents, T = r.num_years;

  std::vector<Chart> strat;
  for (std::size_t i = 0; i < x.num_agents(); ++i) {
    Chart c{"Agent " + std::to_string(i + 1) + " land fractions", "year", "fraction", {}, {}, 0.0, 1.0};
    for (std::size_t k = 0; k < x.num_crops(); ++k) {
      Series s{k < crop_names.size() ? crop_names[k] : "crop " + std::to_string(k + 1), years(1, T), {},
               k >= 2, false};
      for (std::size_t t = 0; t < x.num_years(); ++t) s.y.push_back(x.at(i, k, t));
      c.series.push_back(std::move(s));
    }
    strat.push_back(std::move(c));
  }
  written.push_back(dir / "strategies.svg");
  detail::write_file(written.back(), render_svg_stack("Strategies by year", strat));

  Chart util{"Net gain by year", "year", "net gain ($ thousand)", {}, {}, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    Series s{"agent " + std::to_string(i + 1), years(1, T), {}, false, false};
    for (std::size_t t = 0; t < T; ++t) s.y.push_back(r.at(i, t).net / 1e3);
    util.series.push_back(std::move(s));
  }
  written.push_back(dir / "utilities.svg");
  detail::write_file(written.back(), render_svg(util));

  Chart heads{"Groundwater head by year", "year", "head (m)", {}, {}, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    Series s{"agent " + std::to_string(i + 1), years(0, r.heads.empty() ? 0 : r.heads.size() - 1), {},
             false, false};
    for (const auto& st : r.heads) s.y.push_back(st.heads[i]);
    heads.series.push_back(std::move(s));
  }
  Series boundary{"boundary", years(0, r.heads.empty() ? 0 : r.heads.size() - 1), {}, true, false};
  for (const auto& st : r.heads) boundary.y.push_back(st.boundary_head);
  if (!r.heads.empty()) heads.series.push_back(std::move(boundary));
  written.push_back(dir / "heads.svg");
  detail::write_file(written.back(), render_svg(heads));

  Chart scatter{"Pumped volume vs utility", "total pumped (million m3)", "utility ($ million)", {}, {},
                0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    double w = 0.0;
    for (std::size_t t = 0; t < T; ++t) w += r.at(i, t).pumped;
    scatter.series.push_back(
        {"agent " + std::to_string(i + 1), {w / 1e6}, {r.utilities[i] / 1e6}, false, true});
  }
  written.push_back(dir / "pumped_vs_utility.svg");
  detail::write_file(written.back(), render_svg(scatter));
  return written;
}

fs::path render_lema_plot(const fs::path& dir, const std::vector<double>& fractions,
                          const std::vector<double>& aggregate_utility) {
  Chart c{"Aggregate utility under LEMA caps", "cap as fraction of baseline pumping",
          "aggregate utility ($ million)", {}, fractions, 0.0, 0.0};
  Series s{"equilibrium", fractions, {}, false, false};
  for (double u : aggregate_utility) s.y.push_back(u / 1e6);
  c.series.push_back(std::move(s));
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path out = dir / "lema_utility.svg";
  detail::write_file(out, render_svg(c));
  return out;
}

}  // namespace gwnash::io
