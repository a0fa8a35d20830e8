#include "taexplore/experiment.hpp"

#include <cstdlib>
#include <fstream>

#include "taexplore/parallel.hpp"
#include "taexplore/plot.hpp"
#include "taexplore/random_walk.hpp"
#include "taexplore/td.hpp"

namespace taexplore {

namespace fs = std::filesystem;

std::vector<RunRecord> VariantResult::records() const {
  std::vector<RunRecord> out;
  for (std::size_t r = 0; r < metrics.size(); ++r)
    for (std::size_t e = 0; e < metrics[r].size(); ++e)
      out.push_back({static_cast<int>(r), static_cast<int>(e), betas[e],
                     metrics[r][e]});
  return out;
}

std::unique_ptr<Environment> make_environment(const ExperimentConfig& c) {
  switch (c.env) {
    case EnvKind::kRandomWalk:
      return std::make_unique<RandomWalkEnv>(
          RandomWalkEnv::from_total_states(c.randomwalk_size));
    case EnvKind::kTempControl: {
      TempControlParams p = c.temp;
      p.gamma = c.ppo.gamma;
      return std::make_unique<TempControlEnv>(p);
    }
    case EnvKind::kFourTank: {
      FourTankParams p = c.tank;
      p.gamma = c.ppo.gamma;
      return std::make_unique<FourTankEnv>(p);
    }
  }
  return nullptr;
}

MetricSense metric_sense(const ExperimentConfig& c) {
  return c.algorithm == AlgorithmKind::kTd0 ? MetricSense::kLowerIsBetter
                                            : MetricSense::kHigherIsBetter;
}

CsvTable runs_table(const VariantResult& v) {
  CsvTable t;
  t.header = {"run", "episode", "beta", "metric"};
  for (const RunRecord& r : v.records())
    t.rows.push_back({static_cast<double>(r.run),
                      static_cast<double>(r.episode), r.beta, r.metric});
  return t;
}

// run is -1 on aggregate rows; metric repeats metric_mean.
CsvTable aggregate_table(const VariantResult& v) {
  CsvTable t;
  t.header = {"run", "episode", "beta", "metric", "metric_mean",
              "metric_stderr"};
  for (std::size_t e = 0; e < v.mean.size(); ++e)
    t.rows.push_back({-1.0, static_cast<double>(e), v.betas[e], v.mean[e],
                      v.mean[e], v.stderr_[e]});
  return t;
}

nlohmann::json summarize(const ExperimentConfig& c,
                         const std::vector<VariantResult>& variants) {
  const MetricSense sense = metric_sense(c);
  nlohmann::json s;
  s["name"] = c.name;
  s["metric"] = c.algorithm == AlgorithmKind::kTd0 ? "rms_error"
                                                   : "target_return";
  s["sense"] = sense == MetricSense::kLowerIsBetter ? "lower_is_better"
                                                    : "higher_is_better";
  s["window"] = c.plot_window;
  s["final_window"] = c.final_window;

  const VariantResult* baseline = nullptr;
  for (const auto& v : variants) {
    if (v.variant.schedule.kind == BetaSchedule::Kind::kConstantZero) {
      baseline = &v;
      break;
    }
  }
  s["baseline"] = baseline ? nlohmann::json(baseline->variant.label)
                           : nlohmann::json(nullptr);

  std::vector<std::pair<std::string, double>> thresholds;
  if (baseline) {
    const double final_mean = tail_mean(baseline->mean, c.final_window);
    for (double f : c.threshold_fractions) {
      thresholds.emplace_back(format_number(f),
                              relative_threshold(final_mean, f, sense));
    }
    nlohmann::json th;
    for (const auto& [key, value] : thresholds) th[key] = value;
    s["thresholds"] = th;
  }

  nlohmann::json per = nlohmann::json::object();
  for (const auto& v : variants) {
    nlohmann::json entry;
    entry["final_mean"] = tail_mean(v.mean, c.final_window);
    entry["runs"] = v.metrics.size();
    nlohmann::json hits = nlohmann::json::object();
    nlohmann::json speed = nlohmann::json::object();
    for (const auto& [key, thr] : thresholds) {
      const auto hit = episodes_to_threshold(v.mean, thr, sense, c.plot_window);
      hits[key] = hit ? nlohmann::json(*hit) : nlohmann::json(nullptr);
      const auto base_hit =
          episodes_to_threshold(baseline->mean, thr, sense, c.plot_window);
      if (hit && base_hit && *hit > 0) {
        speed[key] = static_cast<double>(*base_hit) / *hit;
      } else {
        speed[key] = nullptr;
      }
    }
    entry["episodes_to_threshold"] = hits;
    entry["speedup_vs_baseline"] = speed;
    per[v.variant.label] = entry;
  }
  s["variants"] = per;
  return s;
}

fs::path resolve_output_dir(const ExperimentConfig& config,
                            const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv("TAEXPLORE_OUTPUT_DIR"); env && *env)
    return env;
  return config.output_dir;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void aggregate(VariantResult& v) {
  const std::size_t episodes = v.betas.size();
  v.mean.assign(episodes, 0.0);
  v.stderr_.assign(episodes, 0.0);
  std::vector<double> column(v.metrics.size());
  for (std::size_t e = 0; e < episodes; ++e) {
    for (std::size_t r = 0; r < v.metrics.size(); ++r)
      column[r] = v.metrics[r][e];
    const MeanAndError me = mean_and_stderr(column);
    v.mean[e] = me.mean;
    v.stderr_[e] = me.stderr_;
  }
}

std::vector<VariantResult> execute(const ExperimentConfig& c, int workers) {
  const auto env = make_environment(c);
  std::vector<VariantResult> variants(c.schedules.size());
  for (std::size_t i = 0; i < variants.size(); ++i) {
    auto& v = variants[i];
    v.variant = c.schedules[i];
    v.betas.resize(c.episodes);
    for (int e = 0; e < c.episodes; ++e)
      v.betas[e] = beta_at(v.variant.schedule, e);
    v.metrics.resize(c.runs);
    if (c.algorithm == AlgorithmKind::kPpo) v.episode_stats.resize(c.runs);
  }
  const int jobs = static_cast<int>(variants.size()) * c.runs;
  parallel_for(jobs, workers, [&](int job) {
    VariantResult& v = variants[job / c.runs];
    const int run = job % c.runs;
    if (c.algorithm == AlgorithmKind::kTd0) {
      const auto& rw = static_cast<const RandomWalkEnv&>(*env);
      TdOptions opts;
      opts.alpha = c.td_alpha;
      v.metrics[run] = run_td_single(rw, v.variant.schedule, c.episodes,
                                     c.master_seed, run, opts);
    } else {
      PpoRunResult res = ppo_train(*env, v.variant.schedule, c.ppo, c.episodes,
                                   c.master_seed, run);
      auto& m = v.metrics[run];
      m.reserve(res.episodes.size());
      for (const auto& ep : res.episodes) m.push_back(ep.target_return);
      v.episode_stats[run] = std::move(res.episodes);
    }
  });
  for (auto& v : variants) aggregate(v);
  return variants;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const RunOptions& options) {
  ExperimentResult result;
  result.config = config;
  const auto& out = options.output_dir;
  if (out) {
    fs::create_directories(*out);
    fs::remove(*out / "INCOMPLETE");
    write_text(*out / "resolved_config.json", to_json(config).dump(2) + "\n");
  }
  try {
    result.variants = execute(config, options.workers);
    result.summary = summarize(config, result.variants);
    if (out) {
      std::vector<PlotSeries> series;
      for (const auto& v : result.variants) {
        const fs::path dir = *out / v.variant.label;
        fs::create_directories(dir);
        runs_table(v).write(dir / "runs.csv");
        aggregate_table(v).write(dir / "aggregate.csv");
        PlotSeries s{v.variant.label, {}, moving_average(v.mean, config.plot_window)};
        for (std::size_t e = 0; e < v.mean.size(); ++e)
          s.x.push_back(static_cast<double>(e));
        series.push_back(std::move(s));
      }
      write_text(*out / "summary.json", result.summary.dump(2) + "\n");
      PlotOptions po;
      po.title = config.name;
      po.y_label = config.algorithm == AlgorithmKind::kTd0
                       ? "RMS error"
                       : "target return (moving average)";
      write_text(*out / "plot.svg", render_svg(series, po));
    }
  } catch (const std::exception& e) {
    if (out) write_text(*out / "INCOMPLETE", std::string(e.what()) + "\n");
    throw;
  }
  return result;
}

}  // namespace taexplore
