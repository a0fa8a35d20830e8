#include "taexplore/schedule.hpp"

#include <cmath>
#include <stdexcept>

#include "taexplore/mdp.hpp"

namespace taexplore {

BetaSchedule BetaSchedule::exponential(double beta0, double lambda,
                                       double beta_min) {
  BetaSchedule s;
  s.kind = Kind::kExponential;
  s.beta0 = beta0;
  s.lambda = lambda;
  s.beta_min = beta_min;
  s.validate();
  return s;
}

BetaSchedule BetaSchedule::linear(double beta0, int decay_episodes) {
  BetaSchedule s;
  s.kind = Kind::kLinear;
  s.beta0 = beta0;
  s.decay_episodes = decay_episodes;
  s.validate();
  return s;
}

BetaSchedule BetaSchedule::constant_zero() { return BetaSchedule{}; }

void BetaSchedule::validate() const {
  if (kind == Kind::kConstantZero) return;
  if (!(beta0 >= 0.0 && beta0 <= 1.0))
    throw ContractViolation("schedule: beta0 must lie in [0, 1]");
  if (kind == Kind::kExponential) {
    if (!(lambda > 0.0 && lambda < 1.0))
      throw ContractViolation("schedule: lambda must lie in (0, 1)");
    if (!(beta_min >= 0.0))
      throw ContractViolation("schedule: beta_min must be >= 0");
  }
  if (kind == Kind::kLinear && decay_episodes < 1)
    throw ContractViolation("schedule: E must be >= 1");
}

double beta_at(const BetaSchedule& sched, long long episode) {
  if (episode < 0) throw ContractViolation("beta_at: negative episode index");
  switch (sched.kind) {
    case BetaSchedule::Kind::kConstantZero:
      return 0.0;
    case BetaSchedule::Kind::kLinear: {
      const long long E = sched.decay_episodes;
      if (episode >= E) return 0.0;
      // Ratio first so that e = 0 returns beta0 exactly.
      return sched.beta0 *
             (static_cast<double>(E - episode) / static_cast<double>(E));
    }
    case BetaSchedule::Kind::kExponential: {
      const double b =
          sched.beta0 * std::pow(sched.lambda, static_cast<double>(episode));
      return b < sched.beta_min ? 0.0 : b;
    }
  }
  return 0.0;
}

std::string to_string(BetaSchedule::Kind kind) {
  switch (kind) {
    case BetaSchedule::Kind::kExponential:
      return "exponential";
    case BetaSchedule::Kind::kLinear:
      return "linear";
    case BetaSchedule::Kind::kConstantZero:
      return "constant-zero";
  }
  return "constant-zero";
}

BetaSchedule::Kind schedule_kind_from_string(const std::string& name) {
  if (name == "exponential") return BetaSchedule::Kind::kExponential;
  if (name == "linear") return BetaSchedule::Kind::kLinear;
  if (name == "constant-zero" || name == "none")
    return BetaSchedule::Kind::kConstantZero;
  throw std::invalid_argument("unknown schedule kind '" + name + "'");
}

}  // namespace taexplore
