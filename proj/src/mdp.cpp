#include "taexplore/mdp.hpp"

#include <cmath>

#include "taexplore/schedule.hpp"

namespace taexplore {

void EnvSpec::validate() const {
  if (state_dim < 1) throw ContractViolation("EnvSpec: state_dim must be >= 1");
  if (action_dim < 0) throw ContractViolation("EnvSpec: action_dim must be >= 0");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw ContractViolation("EnvSpec: gamma must lie in [0, 1]");
  if (horizon < 1) throw ContractViolation("EnvSpec: horizon must be >= 1");
  if (episode_count < 1)
    throw ContractViolation("EnvSpec: episode_count must be >= 1");
}

void Environment::check_step_shapes(const Vector& state,
                                    const Vector& action) const {
  if (state.size() != spec().state_dim) {
    throw ContractViolation(name() + ": state has length " +
                            std::to_string(state.size()) + ", expected " +
                            std::to_string(spec().state_dim));
  }
  // MRPs ignore whatever action is passed.
  if (spec().action_dim > 0 && action.size() != spec().action_dim) {
    throw ContractViolation(name() + ": action has length " +
                            std::to_string(action.size()) + ", expected " +
                            std::to_string(spec().action_dim));
  }
}

double RewardChoice::select(double r_target, double r_assist) const {
  switch (kind) {
    case Kind::kTarget:
      return r_target;
    case Kind::kAssist:
      return r_assist;
    case Kind::kBlend:
      return blend(r_target, r_assist, beta);
  }
  return r_target;
}

double RewardChoice::select(const DualRewardStep& step) const {
  return select(step.r_target, step.r_assist);
}

double episode_return(const Trajectory& traj, double gamma, RewardChoice which) {
  if (traj.steps.empty())
    throw ContractViolation("episode_return: empty trajectory");
  double total = 0.0;
  double discount = 1.0;
  for (const auto& step : traj.steps) {
    total += discount * which.select(step);
    discount *= gamma;
  }
  return total;
}

}  // namespace taexplore
