#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "taexplore/config.hpp"
#include "taexplore/experiment.hpp"
#include "taexplore/four_tank.hpp"
#include "taexplore/ppo.hpp"
#include "taexplore/random_walk.hpp"
#include "taexplore/schedule.hpp"
#include "taexplore/stats.hpp"
#include "taexplore/td.hpp"
#include "taexplore/temp_control.hpp"

namespace py = pybind11;
using namespace taexplore;

namespace {

RewardChoice reward_choice(const std::string& which, double beta) {
  if (which == "target") return RewardChoice::target();
  if (which == "assist") return RewardChoice::assist();
  if (which == "blend") return RewardChoice::blended(beta);
  throw std::invalid_argument("reward must be 'target', 'assist' or 'blend'");
}

py::dict step_dict(const DualRewardStep& s) {
  py::dict d;
  d["next_state"] = s.next_state;
  d["r_target"] = s.r_target;
  d["r_assist"] = s.r_assist;
  d["terminated"] = s.terminated;
  return d;
}

py::dict experiment_dict(const ExperimentResult& r) {
  py::dict variants;
  for (const VariantResult& v : r.variants) {
    py::dict d;
    d["beta"] = v.betas;
    d["metrics"] = v.metrics;
    d["mean"] = v.mean;
    d["stderr"] = v.stderr_;
    variants[py::str(v.variant.label)] = d;
  }
  py::dict out;
  out["variants"] = variants;
  out["summary"] = py::module_::import("json").attr("loads")(r.summary.dump());
  return out;
}

nlohmann::json to_nlohmann(const py::handle& obj) {
  const std::string text =
      py::str(py::module_::import("json").attr("dumps")(obj));
  return nlohmann::json::parse(text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Per-episode reward annealing experiments (C++ core)";

  py::register_exception<ContractViolation>(m, "ContractViolation",
                                            PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<BetaSchedule>(m, "BetaSchedule")
      .def_static("exponential", &BetaSchedule::exponential, py::arg("beta0"),
                  py::arg("lam"), py::arg("beta_min") = 1e-6)
      .def_static("linear", &BetaSchedule::linear, py::arg("beta0"),
                  py::arg("decay_episodes"))
      .def_static("constant_zero", &BetaSchedule::constant_zero)
      .def_property_readonly("kind", [](const BetaSchedule& s) { return to_string(s.kind); })
      .def_readonly("beta0", &BetaSchedule::beta0)
      .def("__call__", [](const BetaSchedule& s, long long e) { return beta_at(s, e); });

  m.def("beta_at", &beta_at, py::arg("schedule"), py::arg("episode"));
  m.def("blend", &blend, py::arg("r_target"), py::arg("r_assist"), py::arg("beta"));

  py::class_<RandomWalkEnv>(m, "RandomWalkEnv")
      .def(py::init<int>(), py::arg("n_nonterminal"))
      .def_static("from_total_states", &RandomWalkEnv::from_total_states)
      .def("step_direction", [](const RandomWalkEnv& e, int s, bool right) {
        return step_dict(e.step_direction(s, right));
      })
      .def_property_readonly("center", &RandomWalkEnv::center)
      .def_property_readonly("n_nonterminal", &RandomWalkEnv::n_nonterminal);

  m.def("rw_true_values",
        [](int total_states, const std::string& reward, double beta) {
          return rw_true_values(RandomWalkEnv::from_total_states(total_states),
                                reward_choice(reward, beta));
        },
        py::arg("total_states"), py::arg("reward") = "target", py::arg("beta") = 0.0);
  m.def("rms_error", &rms_error, py::arg("estimate"), py::arg("reference"));

  m.def("run_td_experiment",
        [](int total_states, const BetaSchedule& sched, int episodes, int runs,
           std::uint64_t seed, double alpha) {
          TdOptions opts;
          opts.alpha = alpha;
          const auto r = run_td_experiment(RandomWalkEnv::from_total_states(total_states),
                                           sched, episodes, runs, seed, opts);
          py::dict d;
          d["beta"] = r.betas;
          d["run_rms"] = r.run_rms;
          d["mean_rms"] = r.mean_rms;
          return d;
        },
        py::arg("total_states"), py::arg("schedule"), py::arg("episodes"),
        py::arg("runs"), py::arg("master_seed") = 1, py::arg("alpha") = 0.1);

  py::class_<TempControlEnv>(m, "TempControlEnv")
      .def(py::init([](double omega, double noise_std) {
             TempControlParams p;
             p.omega = omega;
             p.noise_std = noise_std;
             return TempControlEnv(p);
           }),
           py::arg("omega") = 1.0, py::arg("noise_std") = 0.01)
      .def("step", [](const TempControlEnv& e, const Vector& s, const Vector& a,
                      std::uint64_t seed) {
        RngStream rng(seed, 0);
        return step_dict(e.step(s, a, rng));
      }, py::arg("state"), py::arg("action"), py::arg("seed") = 0);

  py::class_<FourTankEnv>(m, "FourTankEnv")
      .def(py::init<>())
      .def("step", [](const FourTankEnv& e, const Vector& s, const Vector& a) {
        return step_dict(e.step(s, a));
      }, py::arg("state"), py::arg("action"))
      .def_property_readonly("c", [](const FourTankEnv& e) { return e.params().c; });

  m.def("moving_average",
        [](const std::vector<double>& xs, int window) { return moving_average(xs, window); },
        py::arg("series"), py::arg("window") = 50);

  m.def("ppo_train",
        [](const std::string& env_name, const BetaSchedule& sched, int episodes,
           std::uint64_t seed, std::vector<int> hidden, int rollout_min_steps) {
          PpoConfig cfg;
          cfg.hidden_sizes = std::move(hidden);
          cfg.rollout_min_steps = rollout_min_steps;
          std::unique_ptr<Environment> env;
          if (env_name == "tempcontrol") {
            env = std::make_unique<TempControlEnv>();
          } else if (env_name == "fourtank") {
            env = std::make_unique<FourTankEnv>();
          } else {
            throw std::invalid_argument("env must be 'tempcontrol' or 'fourtank'");
          }
          PpoRunResult r;
          {
            py::gil_scoped_release release;
            r = ppo_train(*env, sched, cfg, episodes, seed);
          }
          py::list rows;
          for (const EpisodeStats& s : r.episodes) {
            py::dict d;
            d["episode"] = s.episode;
            d["beta"] = s.beta;
            d["target_return"] = s.target_return;
            d["assist_return"] = s.assist_return;
            d["length"] = s.length;
            d["violations"] = s.violations;
            rows.append(d);
          }
          return rows;
        },
        py::arg("env"), py::arg("schedule"), py::arg("episodes"),
        py::arg("master_seed") = 1, py::arg("hidden_sizes") = std::vector<int>{64, 64},
        py::arg("rollout_min_steps") = 2048);

  m.def("resolve_config", [](const py::object& doc) {
    const auto resolved = to_json(parse_config(to_nlohmann(doc)));
    return py::module_::import("json").attr("loads")(resolved.dump());
  }, py::arg("config"));

  m.def("run_config",
        [](const py::object& doc, std::optional<std::filesystem::path> out, int workers) {
          const ExperimentConfig c = parse_config(to_nlohmann(doc));
          RunOptions opts;
          opts.workers = workers;
          opts.output_dir = std::move(out);
          ExperimentResult r;
          {
            py::gil_scoped_release release;
            r = run_experiment(c, opts);
          }
          return experiment_dict(r);
        },
        py::arg("config"), py::arg("out_dir") = py::none(), py::arg("workers") = 1);

  m.def("run_config_file",
        [](const std::filesystem::path& path, std::optional<std::filesystem::path> out,
           int workers) {
          const ExperimentConfig c = load_config(path);
          RunOptions opts;
          opts.workers = workers;
          opts.output_dir = std::move(out);
          ExperimentResult r;
          {
            py::gil_scoped_release release;
            r = run_experiment(c, opts);
          }
          return experiment_dict(r);
        },
        py::arg("path"), py::arg("out_dir") = py::none(), py::arg("workers") = 1);
}
