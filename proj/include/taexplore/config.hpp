#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "taexplore/four_tank.hpp"
#include "taexplore/ppo.hpp"
#include "taexplore/schedule.hpp"
#include "taexplore/temp_control.hpp"

namespace taexplore {

// Carries the dotted key path of the offending entry, e.g. "env.omega".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key_path, const std::string& message)
      : std::runtime_error(key_path + ": " + message), key_path_(key_path) {}
  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

enum class EnvKind { kRandomWalk, kTempControl, kFourTank };
enum class AlgorithmKind { kTd0, kPpo };

struct ScheduleVariant {
  std::string label;
  BetaSchedule schedule;
};

struct ExperimentConfig {
  std::string name = "experiment";
  EnvKind env = EnvKind::kRandomWalk;
  int randomwalk_size = 5;  // total states, terminals included
  TempControlParams temp;
  FourTankParams tank;

  AlgorithmKind algorithm = AlgorithmKind::kTd0;
  double td_alpha = 0.1;
  PpoConfig ppo;

  std::vector<ScheduleVariant> schedules;
  int episodes = 100;
  int runs = 100;
  std::uint64_t master_seed = 1;
  std::string output_dir;
  int plot_window = 1;
  int final_window = 1000;
  std::vector<double> threshold_fractions = {0.95};
};

// Parses, fills defaults and validates. Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

// Fully resolved form; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const ExperimentConfig& config);

std::string to_string(EnvKind kind);
std::string to_string(AlgorithmKind kind);

}  // namespace taexplore
