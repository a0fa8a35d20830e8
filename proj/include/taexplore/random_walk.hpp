#pragma once

#include "taexplore/mdp.hpp"

namespace taexplore {

// Undiscounted N-state random walk. Index 0 is the left terminal,
// n_nonterminal + 1 the right terminal; every episode starts at the center.
//
// Target reward: 1 on entering the right terminal, else 0.
// Assistant reward: 1 on entering the right terminal, 0.1 for any other move
// to the right, 0 for moves to the left.
class RandomWalkEnv final : public Environment {
 public:
  static constexpr int kStepCap = 1'000'000;

  explicit RandomWalkEnv(int n_nonterminal, double assist_step_reward = 0.1,
                         double terminal_reward = 1.0);

  // Builds from the total state count (5, 11, 33, ...), terminals included.
  static RandomWalkEnv from_total_states(int total_states);

  const EnvSpec& spec() const override { return spec_; }
  Vector reset(RngStream& rng) const override;
  DualRewardStep step(const Vector& state, const Vector& action,
                      RngStream& rng) const override;
  std::string name() const override { return "randomwalk"; }

  // Deterministic transition used by step(); exposed for tests.
  DualRewardStep step_direction(int state, bool move_right) const;

  int n_nonterminal() const { return n_; }
  int center() const { return (n_ + 1) / 2; }
  bool is_terminal(int state) const { return state <= 0 || state >= n_ + 1; }
  double assist_step_reward() const { return assist_step_reward_; }
  double terminal_reward() const { return terminal_reward_; }

 private:
  int n_;
  double assist_step_reward_;
  double terminal_reward_;
  EnvSpec spec_;
};

// Exact values of the non-terminal states (length n_nonterminal) under the
// equiprobable walk with gamma = 1, solved as a tridiagonal Bellman system.
Vector rw_true_values(const RandomWalkEnv& env, RewardChoice reward);

// Componentwise max of |v(i) - E[r + v(s')]| over non-terminal states.
double rw_bellman_residual(const RandomWalkEnv& env, RewardChoice reward,
                           const Vector& values);

double rms_error(const Vector& values, const Vector& reference);

}  // namespace taexplore
