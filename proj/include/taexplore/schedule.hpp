#pragma once

#include <string>

namespace taexplore {

// Annealing weight beta(e) of the assistant reward, a pure function of the
// episode index.
struct BetaSchedule {
  enum class Kind { kExponential, kLinear, kConstantZero };

  Kind kind = Kind::kConstantZero;
  double beta0 = 0.0;
  double lambda = 0.5;   // exponential only, in (0, 1)
  int decay_episodes = 1;  // E, linear only
  // Exponential values below this snap to exactly 0.
  double beta_min = 1e-6;

  static BetaSchedule exponential(double beta0, double lambda,
                                  double beta_min = 1e-6);
  static BetaSchedule linear(double beta0, int decay_episodes);
  static BetaSchedule constant_zero();

  void validate() const;
};

double beta_at(const BetaSchedule& sched, long long episode);

// beta * r_assist + (1 - beta) * r_target. Exact identities at beta = 0 and 1.
inline double blend(double r_target, double r_assist, double beta) {
  return beta * r_assist + (1.0 - beta) * r_target;
}

std::string to_string(BetaSchedule::Kind kind);
BetaSchedule::Kind schedule_kind_from_string(const std::string& name);

}  // namespace taexplore
