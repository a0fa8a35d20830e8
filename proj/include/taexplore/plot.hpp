#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace taexplore {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "episode";
  std::string y_label = "metric";
  int width = 720;
  int height = 440;
};

// Static SVG line chart: one <polyline> per series, axes, ticks and legend.
// Throws std::invalid_argument for an empty series list or an empty series.
std::string render_svg(const std::vector<PlotSeries>& series,
                       const PlotOptions& options);

// Reads aggregated CSVs (episode, metric_mean) and smooths each with a
// trailing moving average. Legend labels come from the file location:
// ".../<label>/aggregate.csv" or "<label>.csv".
std::vector<PlotSeries> load_aggregate_series(
    const std::vector<std::filesystem::path>& csv_paths, int window);

}  // namespace taexplore
