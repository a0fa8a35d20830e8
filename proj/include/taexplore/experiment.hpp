#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "taexplore/config.hpp"
#include "taexplore/csv.hpp"
#include "taexplore/mdp.hpp"
#include "taexplore/ppo.hpp"
#include "taexplore/stats.hpp"

namespace taexplore {

// One row per (run, episode). metric is the RMS error for td0 and the
// undiscounted target-reward return for ppo.
struct RunRecord {
  int run = 0;
  int episode = 0;
  double beta = 0.0;
  double metric = 0.0;
};

struct VariantResult {
  ScheduleVariant variant;
  std::vector<double> betas;                  // [episode]
  std::vector<std::vector<double>> metrics;   // [run][episode]
  std::vector<double> mean;                   // [episode]
  std::vector<double> stderr_;                // [episode]
  // ppo only: per-episode statistics of each run.
  std::vector<std::vector<EpisodeStats>> episode_stats;

  std::vector<RunRecord> records() const;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<VariantResult> variants;
  nlohmann::json summary;
};

struct RunOptions {
  int workers = 1;
  // Where files go; nullopt keeps everything in memory.
  std::optional<std::filesystem::path> output_dir;
};

std::unique_ptr<Environment> make_environment(const ExperimentConfig& config);
MetricSense metric_sense(const ExperimentConfig& config);

// Runs every (schedule, run) pair, aggregates, and writes:
//   resolved_config.json, <label>/runs.csv, <label>/aggregate.csv,
//   summary.json, plot.svg
// On failure an INCOMPLETE marker holding the error text is left behind and
// the exception propagates.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const RunOptions& options = {});

CsvTable runs_table(const VariantResult& variant);
CsvTable aggregate_table(const VariantResult& variant);
nlohmann::json summarize(const ExperimentConfig& config,
                         const std::vector<VariantResult>& variants);

// Output directory precedence: explicit flag, then $TAEXPLORE_OUTPUT_DIR,
// then the config's output_dir.
std::filesystem::path resolve_output_dir(const ExperimentConfig& config,
                                         const std::optional<std::string>& flag);

}  // namespace taexplore
