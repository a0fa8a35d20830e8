#include "taexplore/plot.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "taexplore/csv.hpp"
#include "taexplore/stats.hpp"

namespace taexplore {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

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

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series,
                       const PlotOptions& options) {
  if (series.empty()) throw std::invalid_argument("plot: no series given");
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size())
      throw std::invalid_argument("plot: series '" + s.label +
                                  "' is empty or ragged");
    for (double v : s.x) x_min = std::min(x_min, v), x_max = std::max(x_max, v);
    for (double v : s.y) y_min = std::min(y_min, v), y_max = std::max(y_max, v);
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  const double left = 70, right = 20, top = 40, bottom = 50;
  const double pw = options.width - left - right;
  const double ph = options.height - top - bottom;
  auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * pw; };
  // SVG y grows downward.
  auto sy = [&](double y) { return top + (y_max - y) / (y_max - y_min) * ph; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      options.width, options.height, options.width, options.height);
  svg += fmt::format(
      "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", options.width,
      options.height);
  svg += fmt::format(
      "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}"
      "</text>\n",
      options.width / 2, escape(options.title));
  svg += fmt::format(
      "<g stroke=\"black\"><line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\"/>"
      "<line x1=\"{0}\" y1=\"{3}\" x2=\"{0}\" y2=\"{1}\"/></g>\n",
      left, top + ph, left + pw, top);
  for (int k = 0; k <= 4; ++k) {
    const double xv = x_min + (x_max - x_min) * k / 4.0;
    const double yv = y_min + (y_max - y_min) * k / 4.0;
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.4g}</text>\n",
        sx(xv), top + ph + 18, xv);
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.4g}</text>\n",
        left - 6, sy(yv) + 4, yv);
  }
  svg += fmt::format(
      "<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
      left + pw / 2, options.height - 10, escape(options.x_label));
  svg += fmt::format(
      "<text x=\"16\" y=\"{:.1f}\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 16 {:.1f})\">{}</text>\n",
      top + ph / 2, top + ph / 2, escape(options.y_label));

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    std::string points;
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (k) points += ' ';
      points += fmt::format("{:.2f},{:.2f}", sx(s.x[k]), sy(s.y[k]));
    }
    svg += fmt::format(
        "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" "
        "points=\"{}\"/>\n",
        color, points);
    const double ly = top + 14 + 16 * static_cast<double>(i);
    svg += fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" "
        "stroke=\"{3}\" stroke-width=\"2\"/><text x=\"{4:.1f}\" y=\"{5:.1f}\">"
        "{6}</text>\n",
        left + pw - 150, ly, left + pw - 130, color, left + pw - 124, ly + 4,
        escape(s.label));
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<PlotSeries> load_aggregate_series(
    const std::vector<std::filesystem::path>& csv_paths, int window) {
  std::vector<PlotSeries> out;
  for (const auto& path : csv_paths) {
    const CsvTable table = CsvTable::read(path);
    PlotSeries s;
    s.label = path.stem() == "aggregate" && path.has_parent_path()
                  ? path.parent_path().filename().string()
                  : path.stem().string();
    s.x = table.column("episode");
    const std::vector<double> y = table.column("metric_mean");
    if (y.empty())
      throw SchemaError(path.string() + ": no data rows to plot");
    s.y = moving_average(y, window);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace taexplore
