// Command-line front end: run experiments, plot aggregated curves, print the
// random-walk true values.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>

#include "taexplore/config.hpp"
#include "taexplore/experiment.hpp"
#include "taexplore/parallel.hpp"
#include "taexplore/plot.hpp"
#include "taexplore/random_walk.hpp"

namespace {

int run_command(const std::string& config_path,
                const std::optional<std::string>& out_flag, int workers,
                const std::optional<std::uint64_t>& seed) {
  taexplore::ExperimentConfig config = taexplore::load_config(config_path);
  if (seed) config.master_seed = *seed;
  const auto out = taexplore::resolve_output_dir(config, out_flag);
  config.output_dir = out.string();
  taexplore::RunOptions options;
  options.workers = workers;
  options.output_dir = out;
  const auto result = taexplore::run_experiment(config, options);
  std::cout << result.summary.dump(2) << '\n';
  std::cerr << "wrote results to " << out.string() << '\n';
  return 0;
}

int plot_command(const std::vector<std::string>& csvs, const std::string& out,
                 int window, const std::string& title) {
  std::vector<std::filesystem::path> paths(csvs.begin(), csvs.end());
  const auto series = taexplore::load_aggregate_series(paths, window);
  taexplore::PlotOptions options;
  options.title = title;
  options.y_label = window > 1 ? fmt::format("metric ({}-episode moving average)", window)
                               : "metric";
  std::ofstream file(out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + out);
  file << taexplore::render_svg(series, options);
  std::cerr << "wrote " << out << '\n';
  return 0;
}

int true_values_command(int size, const std::string& reward, double beta) {
  const auto env = taexplore::RandomWalkEnv::from_total_states(size);
  taexplore::RewardChoice choice = taexplore::RewardChoice::target();
  if (reward == "assist") choice = taexplore::RewardChoice::assist();
  if (reward == "blend") choice = taexplore::RewardChoice::blended(beta);
  const taexplore::Vector v = taexplore::rw_true_values(env, choice);
  std::cout << "state,value\n";
  for (Eigen::Index i = 0; i < v.size(); ++i)
    std::cout << i + 1 << ',' << taexplore::format_number(v[i]) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TA-Explore experiment runner"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  std::string config_path;
  std::optional<std::string> out_dir;
  int workers = taexplore::default_workers();
  std::optional<std::uint64_t> seed;
  run->add_option("config", config_path, "Experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--workers", workers, "Parallel runs")
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Override master seed");

  auto* plot = app.add_subcommand("plot", "Plot aggregated CSV files to SVG");
  std::vector<std::string> csvs;
  std::string plot_out = "plot.svg";
  int window = 50;
  std::string title = "learning curves";
  plot->add_option("csv", csvs, "aggregate.csv files")->required();
  plot->add_option("--out", plot_out, "Output SVG file");
  plot->add_option("--window", window, "Moving-average window")
      ->check(CLI::PositiveNumber);
  plot->add_option("--title", title, "Figure title");

  auto* tv = app.add_subcommand("true-values",
                                "Print exact random-walk state values");
  int size = 5;
  std::string reward = "target";
  double beta = 0.0;
  tv->add_option("--size", size, "Total states including terminals")
      ->check(CLI::IsMember({5, 11, 33}))
      ->required();
  tv->add_option("--reward", reward, "target | assist | blend")
      ->check(CLI::IsMember({"target", "assist", "blend"}));
  tv->add_option("--beta", beta, "Blend weight for --reward blend")
      ->check(CLI::Range(0.0, 1.0));

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(config_path, out_dir, workers, seed);
    if (plot->parsed()) return plot_command(csvs, plot_out, window, title);
    if (tv->parsed()) return true_values_command(size, reward, beta);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
