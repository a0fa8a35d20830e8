#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "taexplore/csv.hpp"
#include "taexplore/experiment.hpp"
#include "taexplore/plot.hpp"
#include "taexplore/stats.hpp"

namespace taexplore {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("taexplore_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json small_rw() {
  return json::parse(R"({
    "name": "small",
    "env": {"kind": "randomwalk", "size": 5},
    "algorithm": {"kind": "td0"},
    "episodes": 20,
    "runs": 4
  })");
}

std::string config_error_path(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.key_path();
  }
  return "<no error>";
}

TEST(Stats, MovingAverageExamples) {
  std::vector<double> xs;
  for (int i = 1; i <= 10; ++i) xs.push_back(i);
  const auto ma = moving_average(xs, 3);
  EXPECT_DOUBLE_EQ(ma[4], 4.0);
  EXPECT_DOUBLE_EQ(ma[0], 1.0);
  EXPECT_DOUBLE_EQ(ma[1], 1.5);
  EXPECT_EQ(moving_average(xs, 1), xs);
  EXPECT_THROW(moving_average(xs, 0), ContractViolation);
}

TEST(Stats, ThresholdCrossing) {
  const std::vector<double> rms{0.5, 0.4, 0.3, 0.2, 0.1};
  EXPECT_EQ(episodes_to_threshold(rms, 0.3, MetricSense::kLowerIsBetter, 1), 2);
  EXPECT_EQ(episodes_to_threshold(rms, 0.01, MetricSense::kLowerIsBetter, 1),
            std::nullopt);
  const std::vector<double> ret{-9, -8, -5, -1};
  EXPECT_EQ(episodes_to_threshold(ret, -5, MetricSense::kHigherIsBetter, 1), 2);
  EXPECT_DOUBLE_EQ(relative_threshold(-100, 0.95, MetricSense::kHigherIsBetter), -105);
  EXPECT_DOUBLE_EQ(relative_threshold(0.2, 0.95, MetricSense::kLowerIsBetter), 0.21);
}

TEST(Stats, SlopeAndStderr) {
  EXPECT_DOUBLE_EQ(least_squares_slope(std::vector<double>{1, 3, 5, 7}), 2.0);
  const auto m = mean_and_stderr(std::vector<double>{1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.stderr_, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_EQ(mean_and_stderr(std::vector<double>{7}).stderr_, 0.0);
}

TEST(Config, DefaultsForRandomWalk) {
  const ExperimentConfig c = parse_config(json::parse(
      R"({"env": {"kind": "randomwalk"}, "algorithm": {"kind": "td0"}})"));
  EXPECT_EQ(c.episodes, 100);
  EXPECT_EQ(c.runs, 100);
  EXPECT_EQ(c.master_seed, 1u);
  ASSERT_EQ(c.schedules.size(), 2u);
  EXPECT_EQ(c.schedules[1].label, "baseline");
  EXPECT_EQ(c.output_dir, "results/experiment");
}

TEST(Config, DefaultsForFourTank) {
  const ExperimentConfig c = parse_config(json::parse(
      R"({"env": {"kind": "fourtank"}, "algorithm": {"kind": "ppo"}})"));
  EXPECT_EQ(c.episodes, 30000);
  EXPECT_EQ(c.schedules[0].schedule.beta0, 0.5);
  EXPECT_EQ(c.schedules[0].schedule.decay_episodes, 3000);
  EXPECT_EQ(c.ppo.hidden_sizes, (std::vector<int>{512, 256, 64}));
}

TEST(Config, ErrorsNameTheKey) {
  json d = small_rw();
  d["env"]["colour"] = 1;
  EXPECT_EQ(config_error_path(d), "env.colour");

  d = small_rw();
  d["schedule"] = {{"kind", "exponential"}, {"lambda", 1.5}};
  EXPECT_EQ(config_error_path(d), "schedule.lambda");

  d = small_rw();
  d["runs"] = "many";
  EXPECT_EQ(config_error_path(d), "runs");

  d = small_rw();
  d["algorithm"] = {{"kind", "ppo"}};
  EXPECT_EQ(config_error_path(d), "algorithm.kind");

  d = small_rw();
  d["env"] = {{"kind", "tempcontrol"}};
  EXPECT_EQ(config_error_path(d), "algorithm.kind");

  d = small_rw();
  d["schedules"] = json::array({{{"kind", "none"}}, {{"kind", "constant-zero"}}});
  EXPECT_EQ(config_error_path(d), "schedules[1].label");
}

TEST(Config, ResolvedFormRoundTrips) {
  json d = json::parse(R"({
    "env": {"kind": "tempcontrol", "omega": 10},
    "algorithm": {"kind": "ppo", "hidden_sizes": [64, 64]},
    "schedules": [{"kind": "linear", "beta0": 1, "E": 750}, {"kind": "none"}]
  })");
  const ExperimentConfig c = parse_config(d);
  const json resolved = to_json(c);
  EXPECT_EQ(to_json(parse_config(resolved)), resolved);
  EXPECT_EQ(resolved["schedules"][0]["label"], "ta-linear-750");
}

TEST(Config, LoadsFileWithComments) {
  const fs::path dir = scratch_dir("cfgfile");
  std::ofstream(dir / "c.json") << "// comment\n" << small_rw().dump(2);
  EXPECT_EQ(load_config(dir / "c.json").episodes, 20);
  EXPECT_THROW(load_config(dir / "missing.json"), ConfigError);
}

TEST(Csv, RoundTripAndMissingColumn) {
  CsvTable t;
  t.header = {"run", "episode", "beta", "metric"};
  t.rows = {{0, 0, 1, 0.1}, {0, 1, 0.95, 1.0 / 3.0}};
  const CsvTable back = CsvTable::parse(t.to_string());
  EXPECT_EQ(back.rows, t.rows);
  try {
    back.column("metric_mean");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("metric_mean"), std::string::npos);
  }
}

TEST(Experiment, OutputsAreByteIdenticalAcrossRunsAndWorkers) {
  const ExperimentConfig c = parse_config(small_rw());
  const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
  run_experiment(c, {1, a});
  run_experiment(c, {3, b});
  for (const char* f : {"baseline/runs.csv", "baseline/aggregate.csv",
                        "ta-exp-0.95/runs.csv", "ta-exp-0.95/aggregate.csv",
                        "summary.json", "resolved_config.json"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  EXPECT_FALSE(fs::exists(a / "INCOMPLETE"));
  EXPECT_TRUE(fs::exists(a / "plot.svg"));
}

TEST(Experiment, AggregateIsMeanOfRuns) {
  const ExperimentConfig c = parse_config(small_rw());
  const ExperimentResult r = run_experiment(c);
  for (const VariantResult& v : r.variants) {
    const CsvTable agg = aggregate_table(v);
    const auto means = agg.column("metric_mean");
    for (int e = 0; e < c.episodes; ++e) {
      double m = 0.0;
      for (int run = 0; run < c.runs; ++run) m += v.metrics[run][e];
      EXPECT_NEAR(means[e], m / c.runs, 1e-15);
    }
    EXPECT_EQ(runs_table(v).rows.size(), static_cast<std::size_t>(c.runs * c.episodes));
  }
}

TEST(Experiment, SingleRunHasZeroStderr) {
  json d = small_rw();
  d["runs"] = 1;
  const ExperimentResult r = run_experiment(parse_config(d));
  const CsvTable agg = aggregate_table(r.variants[0]);
  EXPECT_EQ(agg.column("metric_mean"), r.variants[0].metrics[0]);
  for (double s : agg.column("metric_stderr")) EXPECT_EQ(s, 0.0);
}

TEST(Experiment, OutputDirPrecedence) {
  ExperimentConfig c;
  c.output_dir = "from_config";
  ::unsetenv("TAEXPLORE_OUTPUT_DIR");
  EXPECT_EQ(resolve_output_dir(c, std::nullopt), fs::path("from_config"));
  ::setenv("TAEXPLORE_OUTPUT_DIR", "from_env", 1);
  EXPECT_EQ(resolve_output_dir(c, std::nullopt), fs::path("from_env"));
  EXPECT_EQ(resolve_output_dir(c, std::string("from_flag")), fs::path("from_flag"));
  ::unsetenv("TAEXPLORE_OUTPUT_DIR");
}

TEST(Plot, OnePolylinePerSeries) {
  const std::vector<PlotSeries> s{{"a", {0, 1, 2}, {3, 2, 1}},
                                  {"b", {0, 1, 2}, {1, 1, 1}}};
  const std::string svg = render_svg(s, {});
  std::size_t count = 0, at = 0;
  while ((at = svg.find("<polyline", at)) != std::string::npos) ++count, ++at;
  EXPECT_EQ(count, 2u);
  EXPECT_THROW(render_svg({}, {}), std::invalid_argument);
  EXPECT_THROW(render_svg({{"e", {}, {}}}, {}), std::invalid_argument);
}

// Larger metric values sit higher on the page, i.e. at smaller SVG y.
TEST(Plot, IncreasingSeriesRises) {
  const std::string svg = render_svg({{"up", {0, 1, 2, 3}, {0, 1, 2, 3}}}, {});
  const auto start = svg.find("points=\"") + 8;
  std::istringstream pts(svg.substr(start, svg.find('"', start) - start));
  std::vector<double> ys;
  std::string pair;
  while (pts >> pair) ys.push_back(std::stod(pair.substr(pair.find(',') + 1)));
  ASSERT_EQ(ys.size(), 4u);
  for (int i = 1; i < 4; ++i) EXPECT_LT(ys[i], ys[i - 1]);
}

TEST(Plot, LoadsAggregateFilesAndRejectsRawRuns) {
  const ExperimentConfig c = parse_config(small_rw());
  const fs::path dir = scratch_dir("plotload");
  run_experiment(c, {1, dir});
  const auto series = load_aggregate_series(
      {dir / "baseline/aggregate.csv", dir / "ta-exp-0.95/aggregate.csv"}, 1);
  ASSERT_EQ(series.size(), 2u);
  EXPECT_EQ(series[0].label, "baseline");
  EXPECT_EQ(series[1].y.size(), 20u);
  EXPECT_THROW(load_aggregate_series({dir / "baseline/runs.csv"}, 1), SchemaError);
}

int run_cli(const std::string& args, const fs::path& out_file) {
  const std::string cmd =
      std::string(TAEXPLORE_CLI_PATH) + " " + args + " > " + out_file.string() + " 2>&1";
  return std::system(cmd.c_str());
}

TEST(Cli, TrueValuesAndRun) {
  const fs::path dir = scratch_dir("cli");
  ASSERT_EQ(run_cli("true-values --size 5", dir / "tv.txt"), 0);
  const CsvTable tv = CsvTable::parse(slurp(dir / "tv.txt"));
  const auto values = tv.column("value");
  ASSERT_EQ(values.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(values[i], 0.25 * (i + 1), 1e-12);
  EXPECT_NE(run_cli("true-values --size 7", dir / "bad.txt"), 0);

  std::ofstream(dir / "c.json") << small_rw().dump();
  ASSERT_EQ(run_cli("run " + (dir / "c.json").string() + " --out " +
                        (dir / "out").string() + " --seed 3",
                    dir / "run.txt"),
            0)
      << slurp(dir / "run.txt");
  EXPECT_TRUE(fs::exists(dir / "out/baseline/aggregate.csv"));
  const json resolved = json::parse(slurp(dir / "out/resolved_config.json"));
  EXPECT_EQ(resolved["master_seed"], 3);

  ASSERT_EQ(run_cli("plot " + (dir / "out/baseline/aggregate.csv").string() +
                        " --out " + (dir / "p.svg").string(),
                    dir / "plot.txt"),
            0);
  EXPECT_NE(slurp(dir / "p.svg").find("<polyline"), std::string::npos);

  std::ofstream(dir / "bad.json") << R"({"env": {"kind": "randomwalk", "sise": 5}, "algorithm": {"kind": "td0"}})";
  EXPECT_NE(run_cli("run " + (dir / "bad.json").string(), dir / "err.txt"), 0);
  EXPECT_NE(slurp(dir / "err.txt").find("env.sise"), std::string::npos);
}

}  // namespace
}  // namespace taexplore
