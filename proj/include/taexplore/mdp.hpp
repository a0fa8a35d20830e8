#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "taexplore/rng.hpp"

namespace taexplore {

using Vector = Eigen::VectorXd;

// Raised when a caller breaks an operation's precondition (shape mismatch,
// stepping from a terminal state, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct EnvSpec {
  int state_dim = 1;
  int action_dim = 0;  // 0 for Markov reward processes
  double gamma = 1.0;
  int horizon = 1;
  int episode_count = 1;

  // Throws ContractViolation if any field is out of range.
  void validate() const;
};

// One transition carrying both rewards computed from the same (s, a, s').
struct DualRewardStep {
  Vector next_state;
  double r_target = 0.0;
  double r_assist = 0.0;
  bool terminated = false;
};

struct Trajectory {
  std::vector<Vector> states;   // |steps| + 1 entries
  std::vector<Vector> actions;  // empty for MRPs
  std::vector<DualRewardStep> steps;
  int episode_index = 0;
};

// Environments never blend rewards; learners do.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual const EnvSpec& spec() const = 0;
  virtual Vector reset(RngStream& rng) const = 0;
  virtual DualRewardStep step(const Vector& state, const Vector& action,
                              RngStream& rng) const = 0;

  // Maps an unbounded policy output (the Gaussian sample around a tanh mean)
  // to a feasible action.
  virtual Vector map_action(const Vector& policy_output) const {
    return policy_output;
  }
  virtual std::string name() const = 0;

 protected:
  void check_step_shapes(const Vector& state, const Vector& action) const;
};

struct RewardChoice {
  enum class Kind { kTarget, kAssist, kBlend };
  Kind kind = Kind::kTarget;
  double beta = 0.0;

  static RewardChoice target() { return {Kind::kTarget, 0.0}; }
  static RewardChoice assist() { return {Kind::kAssist, 0.0}; }
  static RewardChoice blended(double beta) { return {Kind::kBlend, beta}; }

  double select(const DualRewardStep& step) const;
  double select(double r_target, double r_assist) const;
};

// Sum_t gamma^t r_t with r_t chosen by `which`.
double episode_return(const Trajectory& traj, double gamma, RewardChoice which);

// Rolls one episode with a fixed action source. Used by tests and tools; the
// learners drive their own loops.
template <typename Policy>
Trajectory rollout(const Environment& env, Policy&& policy, RngStream& init_rng,
                   RngStream& dyn_rng, int episode_index = 0) {
  Trajectory traj;
  traj.episode_index = episode_index;
  traj.states.push_back(env.reset(init_rng));
  const int horizon = env.spec().horizon;
  for (int t = 0; t < horizon; ++t) {
    const Vector& s = traj.states.back();
    Vector a = env.spec().action_dim > 0 ? Vector(policy(s)) : Vector();
    DualRewardStep step = env.step(s, a, dyn_rng);
    traj.states.push_back(step.next_state);
    if (env.spec().action_dim > 0) traj.actions.push_back(std::move(a));
    const bool done = step.terminated;
    traj.steps.push_back(std::move(step));
    if (done) break;
  }
  return traj;
}

}  // namespace taexplore
