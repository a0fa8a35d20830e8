#pragma once

#include <Eigen/Core>

#include "taexplore/mdp.hpp"

namespace taexplore {

// Three coupled heat sources, s' = A s + B a + e with B = I and
// e ~ N(0, noise_std^2 I). Constraint: every component of s' in [-2, 2].
//   r_target = -omega |a|^2            (- penalty if violated)
//   r_assist = 0                       (- penalty if violated)
// Episodes always run the full horizon.
struct TempControlParams {
  double omega = 1.0;
  double noise_std = 0.01;
  double state_bound = 2.0;
  double penalty = 100.0;
  int horizon = 100;
  double action_scale = 1.0;
  double gamma = 0.99;
};

class TempControlEnv final : public Environment {
 public:
  explicit TempControlEnv(TempControlParams params = {});

  static Eigen::Matrix3d dynamics_matrix();

  const EnvSpec& spec() const override { return spec_; }
  Vector reset(RngStream& rng) const override;
  DualRewardStep step(const Vector& state, const Vector& action,
                      RngStream& rng) const override;
  // action_scale * clamp(x, -1, 1)
  Vector map_action(const Vector& policy_output) const override;
  std::string name() const override { return "tempcontrol"; }

  // Rewards for a transition whose successor is already known.
  DualRewardStep evaluate(const Vector& action, Vector next_state) const;
  bool satisfied(const Vector& state) const;

  const TempControlParams& params() const { return params_; }

 private:
  TempControlParams params_;
  Eigen::Matrix3d A_;
  EnvSpec spec_;
};

}  // namespace taexplore
