#include "taexplore/config.hpp"

#include <cctype>
#include <fstream>
#include <set>

namespace taexplore {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path,
                                          "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(join(path, key), "unknown key");
  }
}

template <typename T>
T get_or(const json& obj, const std::string& path, const std::string& key,
         T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(join(path, key), "wrong value type");
  }
}

double get_number(const json& obj, const std::string& path,
                  const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number())
    throw ConfigError(join(path, key), "expected a number");
  return obj.at(key).get<double>();
}

int get_int(const json& obj, const std::string& path, const std::string& key,
            int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_integer())
    throw ConfigError(join(path, key), "expected an integer");
  return obj.at(key).get<int>();
}

void require(bool ok, const std::string& key_path, const std::string& what) {
  if (!ok) throw ConfigError(key_path, what);
}

EnvKind env_kind_from_string(const std::string& s, const std::string& path) {
  if (s == "randomwalk") return EnvKind::kRandomWalk;
  if (s == "tempcontrol") return EnvKind::kTempControl;
  if (s == "fourtank") return EnvKind::kFourTank;
  throw ConfigError(path, "unknown environment '" + s + "'");
}

AlgorithmKind algorithm_from_string(const std::string& s,
                                    const std::string& path) {
  if (s == "td0") return AlgorithmKind::kTd0;
  if (s == "ppo") return AlgorithmKind::kPpo;
  throw ConfigError(path, "unknown algorithm '" + s + "'");
}

void parse_env(const json& env, ExperimentConfig& c) {
  const std::string p = "env";
  if (!env.contains("kind")) throw ConfigError("env.kind", "missing");
  c.env = env_kind_from_string(get_or<std::string>(env, p, "kind", ""),
                               "env.kind");
  switch (c.env) {
    case EnvKind::kRandomWalk: {
      reject_unknown(env, p, {"kind", "size"});
      c.randomwalk_size = get_int(env, p, "size", 5);
      require(c.randomwalk_size >= 3 && c.randomwalk_size % 2 == 1,
              "env.size", "must be an odd total state count >= 3 (e.g. 5, 11, 33)");
      break;
    }
    case EnvKind::kTempControl: {
      reject_unknown(env, p,
                     {"kind", "omega", "noise_std", "action_scale", "horizon",
                      "penalty", "state_bound"});
      auto& t = c.temp;
      t.omega = get_number(env, p, "omega", t.omega);
      t.noise_std = get_number(env, p, "noise_std", t.noise_std);
      t.action_scale = get_number(env, p, "action_scale", t.action_scale);
      t.horizon = get_int(env, p, "horizon", t.horizon);
      t.penalty = get_number(env, p, "penalty", t.penalty);
      t.state_bound = get_number(env, p, "state_bound", t.state_bound);
      require(t.omega >= 0.0, "env.omega", "must be >= 0");
      require(t.noise_std >= 0.0, "env.noise_std", "must be >= 0");
      require(t.action_scale > 0.0, "env.action_scale", "must be > 0");
      require(t.horizon >= 1, "env.horizon", "must be >= 1");
      require(t.state_bound > 0.0, "env.state_bound", "must be > 0");
      break;
    }
    case EnvKind::kFourTank: {
      reject_unknown(env, p,
                     {"kind", "c", "omega", "horizon", "penalty",
                      "integration", "dt"});
      auto& f = c.tank;
      if (env.contains("c")) {
        const auto& cs = env.at("c");
        require(cs.is_array() && cs.size() == 10, "env.c",
                "must be an array of 10 coefficients");
        for (std::size_t i = 0; i < 10; ++i) {
          const std::string key = "env.c[" + std::to_string(i) + "]";
          require(cs[i].is_number(), key, "expected a number");
          f.c[i] = cs[i].get<double>();
          require(f.c[i] > 0.0, key, "must be > 0");
        }
      }
      f.omega = get_number(env, p, "omega", f.omega);
      f.horizon = get_int(env, p, "horizon", f.horizon);
      f.penalty = get_number(env, p, "penalty", f.penalty);
      f.dt = get_number(env, p, "dt", f.dt);
      const auto mode = get_or<std::string>(env, p, "integration", "direct");
      if (mode == "direct") {
        f.integration = FourTankParams::Integration::kDirect;
      } else if (mode == "incremental") {
        f.integration = FourTankParams::Integration::kIncremental;
      } else {
        throw ConfigError("env.integration",
                          "must be 'direct' or 'incremental'");
      }
      require(f.omega >= 0.0, "env.omega", "must be >= 0");
      require(f.horizon >= 1, "env.horizon", "must be >= 1");
      require(f.dt > 0.0, "env.dt", "must be > 0");
      break;
    }
  }
}

void parse_algorithm(const json& alg, ExperimentConfig& c) {
  const std::string p = "algorithm";
  if (!alg.contains("kind")) throw ConfigError("algorithm.kind", "missing");
  c.algorithm = algorithm_from_string(get_or<std::string>(alg, p, "kind", ""),
                                      "algorithm.kind");
  if (c.algorithm == AlgorithmKind::kTd0) {
    reject_unknown(alg, p, {"kind", "alpha"});
    c.td_alpha = get_number(alg, p, "alpha", 0.1);
    require(c.td_alpha > 0.0 && c.td_alpha <= 1.0, "algorithm.alpha",
            "must lie in (0, 1]");
    return;
  }
  reject_unknown(alg, p,
                 {"kind", "minibatch_size", "epochs_per_update", "lr", "gamma",
                  "gae_lambda", "clip_epsilon", "rollout_min_steps",
                  "value_loss_coef", "entropy_coef", "max_grad_norm",
                  "hidden_sizes", "init_log_spread"});
  auto& q = c.ppo;
  q.minibatch_size = get_int(alg, p, "minibatch_size", q.minibatch_size);
  q.epochs_per_update = get_int(alg, p, "epochs_per_update", q.epochs_per_update);
  q.lr = get_number(alg, p, "lr", q.lr);
  q.gamma = get_number(alg, p, "gamma", q.gamma);
  q.gae_lambda = get_number(alg, p, "gae_lambda", q.gae_lambda);
  q.clip_epsilon = get_number(alg, p, "clip_epsilon", q.clip_epsilon);
  q.rollout_min_steps = get_int(alg, p, "rollout_min_steps", q.rollout_min_steps);
  q.value_loss_coef = get_number(alg, p, "value_loss_coef", q.value_loss_coef);
  q.entropy_coef = get_number(alg, p, "entropy_coef", q.entropy_coef);
  q.max_grad_norm = get_number(alg, p, "max_grad_norm", q.max_grad_norm);
  q.init_log_spread = get_number(alg, p, "init_log_spread", q.init_log_spread);
  if (alg.contains("hidden_sizes")) {
    const auto& hs = alg.at("hidden_sizes");
    require(hs.is_array() && !hs.empty(), "algorithm.hidden_sizes",
            "must be a non-empty array of integers");
    q.hidden_sizes.clear();
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const std::string key = "algorithm.hidden_sizes[" + std::to_string(i) + "]";
      require(hs[i].is_number_integer() && hs[i].get<int>() >= 1, key,
              "must be a positive integer");
      q.hidden_sizes.push_back(hs[i].get<int>());
    }
  }
  try {
    q.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError("algorithm", e.what());
  }
}

ScheduleVariant parse_schedule(const json& s, const std::string& p) {
  reject_unknown(s, p, {"label", "kind", "beta0", "lambda", "E", "beta_min"});
  if (!s.contains("kind")) throw ConfigError(join(p, "kind"), "missing");
  ScheduleVariant v;
  try {
    v.schedule.kind =
        schedule_kind_from_string(get_or<std::string>(s, p, "kind", ""));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(join(p, "kind"), e.what());
  }
  auto& b = v.schedule;
  switch (b.kind) {
    case BetaSchedule::Kind::kConstantZero:
      for (const char* k : {"beta0", "lambda", "E", "beta_min"})
        require(!s.contains(k), join(p, k), "not used by constant-zero");
      break;
    case BetaSchedule::Kind::kExponential:
      require(!s.contains("E"), join(p, "E"), "not used by exponential");
      require(s.contains("lambda"), join(p, "lambda"), "missing");
      b.beta0 = get_number(s, p, "beta0", 1.0);
      b.lambda = get_number(s, p, "lambda", 0.5);
      b.beta_min = get_number(s, p, "beta_min", 1e-6);
      require(b.lambda > 0.0 && b.lambda < 1.0, join(p, "lambda"),
              "must lie in (0, 1)");
      require(b.beta_min >= 0.0, join(p, "beta_min"), "must be >= 0");
      break;
    case BetaSchedule::Kind::kLinear:
      require(!s.contains("lambda") && !s.contains("beta_min"), p,
              "lambda/beta_min not used by linear");
      require(s.contains("E"), join(p, "E"), "missing");
      b.beta0 = get_number(s, p, "beta0", 1.0);
      b.decay_episodes = get_int(s, p, "E", 1);
      require(b.decay_episodes >= 1, join(p, "E"), "must be >= 1");
      break;
  }
  if (b.kind != BetaSchedule::Kind::kConstantZero)
    require(b.beta0 >= 0.0 && b.beta0 <= 1.0, join(p, "beta0"),
            "must lie in [0, 1]");
  v.label = get_or<std::string>(s, p, "label", "");
  if (v.label.empty()) {
    switch (b.kind) {
      case BetaSchedule::Kind::kConstantZero:
        v.label = "baseline";
        break;
      case BetaSchedule::Kind::kExponential:
        v.label = "ta-exp-" + nlohmann::json(b.lambda).dump();
        break;
      case BetaSchedule::Kind::kLinear:
        v.label = "ta-linear-" + std::to_string(b.decay_episodes);
        break;
    }
  }
  for (char ch : v.label) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' ||
                    ch == '_' || ch == '.';
    require(ok, join(p, "label"),
            "may contain only letters, digits, '-', '_' and '.'");
  }
  return v;
}

std::vector<ScheduleVariant> default_schedules(EnvKind env) {
  switch (env) {
    case EnvKind::kRandomWalk:
      return {{"ta-exp-0.95", BetaSchedule::exponential(1.0, 0.95)},
              {"baseline", BetaSchedule::constant_zero()}};
    case EnvKind::kTempControl:
      return {{"ta-linear-4000", BetaSchedule::linear(1.0, 4000)},
              {"baseline", BetaSchedule::constant_zero()}};
    case EnvKind::kFourTank:
      return {{"ta-linear-3000", BetaSchedule::linear(0.5, 3000)},
              {"baseline", BetaSchedule::constant_zero()}};
  }
  return {};
}

}  // namespace

std::string to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::kRandomWalk: return "randomwalk";
    case EnvKind::kTempControl: return "tempcontrol";
    case EnvKind::kFourTank: return "fourtank";
  }
  return "randomwalk";
}

std::string to_string(AlgorithmKind kind) {
  return kind == AlgorithmKind::kTd0 ? "td0" : "ppo";
}

ExperimentConfig parse_config(const nlohmann::json& doc) {
  reject_unknown(doc, "",
                 {"name", "env", "algorithm", "schedules", "schedule",
                  "episodes", "runs", "master_seed", "output_dir",
                  "plot_window", "final_window", "threshold_fractions"});
  ExperimentConfig c;
  c.name = get_or<std::string>(doc, "", "name", c.name);
  if (!doc.contains("env")) throw ConfigError("env", "missing");
  parse_env(doc.at("env"), c);
  if (!doc.contains("algorithm")) throw ConfigError("algorithm", "missing");
  parse_algorithm(doc.at("algorithm"), c);

  const bool td = c.algorithm == AlgorithmKind::kTd0;
  if (td && c.env != EnvKind::kRandomWalk) {
    throw ConfigError("algorithm.kind",
                      "td0 pairs only with env 'randomwalk', got '" +
                          to_string(c.env) + "'");
  }
  if (!td && c.env == EnvKind::kRandomWalk) {
    throw ConfigError("algorithm.kind",
                      "ppo pairs only with 'tempcontrol' or 'fourtank', got "
                      "'randomwalk'");
  }

  require(!(doc.contains("schedule") && doc.contains("schedules")), "schedule",
          "give either 'schedule' or 'schedules', not both");
  if (doc.contains("schedules")) {
    const auto& arr = doc.at("schedules");
    require(arr.is_array() && !arr.empty(), "schedules",
            "must be a non-empty array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      c.schedules.push_back(
          parse_schedule(arr[i], "schedules[" + std::to_string(i) + "]"));
  } else if (doc.contains("schedule")) {
    c.schedules.push_back(parse_schedule(doc.at("schedule"), "schedule"));
  } else {
    c.schedules = default_schedules(c.env);
  }
  std::set<std::string> labels;
  for (std::size_t i = 0; i < c.schedules.size(); ++i) {
    require(labels.insert(c.schedules[i].label).second,
            "schedules[" + std::to_string(i) + "].label", "duplicate label");
  }

  int default_episodes = 100;
  if (c.env == EnvKind::kTempControl) default_episodes = 8000;
  if (c.env == EnvKind::kFourTank) default_episodes = 30000;
  c.episodes = get_int(doc, "", "episodes", default_episodes);
  c.runs = get_int(doc, "", "runs", td ? 100 : 5);
  require(c.episodes >= 1, "episodes", "must be >= 1");
  require(c.runs >= 1, "runs", "must be >= 1");
  if (doc.contains("master_seed")) {
    require(doc.at("master_seed").is_number_unsigned(), "master_seed",
            "expected a non-negative integer");
    c.master_seed = doc.at("master_seed").get<std::uint64_t>();
  }
  c.output_dir = get_or<std::string>(doc, "", "output_dir", "results/" + c.name);
  c.plot_window = get_int(doc, "", "plot_window", td ? 1 : 50);
  c.final_window = get_int(doc, "", "final_window", 1000);
  require(c.plot_window >= 1, "plot_window", "must be >= 1");
  require(c.final_window >= 1, "final_window", "must be >= 1");
  if (doc.contains("threshold_fractions")) {
    const auto& arr = doc.at("threshold_fractions");
    require(arr.is_array(), "threshold_fractions", "must be an array");
    c.threshold_fractions.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string key = "threshold_fractions[" + std::to_string(i) + "]";
      require(arr[i].is_number(), key, "expected a number");
      const double f = arr[i].get<double>();
      require(f > 0.0 && f <= 1.0, key, "must lie in (0, 1]");
      c.threshold_fractions.push_back(f);
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string(), std::string("parse error: ") + e.what());
  }
  return parse_config(doc);
}

nlohmann::json to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  json env;
  env["kind"] = to_string(c.env);
  switch (c.env) {
    case EnvKind::kRandomWalk:
      env["size"] = c.randomwalk_size;
      break;
    case EnvKind::kTempControl:
      env["omega"] = c.temp.omega;
      env["noise_std"] = c.temp.noise_std;
      env["action_scale"] = c.temp.action_scale;
      env["horizon"] = c.temp.horizon;
      env["penalty"] = c.temp.penalty;
      env["state_bound"] = c.temp.state_bound;
      break;
    case EnvKind::kFourTank:
      env["c"] = c.tank.c;
      env["omega"] = c.tank.omega;
      env["horizon"] = c.tank.horizon;
      env["penalty"] = c.tank.penalty;
      env["integration"] =
          c.tank.integration == FourTankParams::Integration::kDirect
              ? "direct"
              : "incremental";
      env["dt"] = c.tank.dt;
      break;
  }
  j["env"] = env;
  json alg;
  alg["kind"] = to_string(c.algorithm);
  if (c.algorithm == AlgorithmKind::kTd0) {
    alg["alpha"] = c.td_alpha;
  } else {
    const auto& q = c.ppo;
    alg["minibatch_size"] = q.minibatch_size;
    alg["epochs_per_update"] = q.epochs_per_update;
    alg["lr"] = q.lr;
    alg["gamma"] = q.gamma;
    alg["gae_lambda"] = q.gae_lambda;
    alg["clip_epsilon"] = q.clip_epsilon;
    alg["rollout_min_steps"] = q.rollout_min_steps;
    alg["value_loss_coef"] = q.value_loss_coef;
    alg["entropy_coef"] = q.entropy_coef;
    alg["max_grad_norm"] = q.max_grad_norm;
    alg["hidden_sizes"] = q.hidden_sizes;
    alg["init_log_spread"] = q.init_log_spread;
  }
  j["algorithm"] = alg;
  json scheds = json::array();
  for (const auto& v : c.schedules) {
    json s;
    s["label"] = v.label;
    s["kind"] = to_string(v.schedule.kind);
    if (v.schedule.kind == BetaSchedule::Kind::kExponential) {
      s["beta0"] = v.schedule.beta0;
      s["lambda"] = v.schedule.lambda;
      s["beta_min"] = v.schedule.beta_min;
    } else if (v.schedule.kind == BetaSchedule::Kind::kLinear) {
      s["beta0"] = v.schedule.beta0;
      s["E"] = v.schedule.decay_episodes;
    }
    scheds.push_back(s);
  }
  j["schedules"] = scheds;
  j["episodes"] = c.episodes;
  j["runs"] = c.runs;
  j["master_seed"] = c.master_seed;
  j["output_dir"] = c.output_dir;
  j["plot_window"] = c.plot_window;
  j["final_window"] = c.final_window;
  j["threshold_fractions"] = c.threshold_fractions;
  return j;
}

}  // namespace taexplore
