#include "taexplore/random_walk.hpp"

#include <cmath>
#include <vector>

namespace taexplore {

RandomWalkEnv::RandomWalkEnv(int n_nonterminal, double assist_step_reward,
                             double terminal_reward)
    : n_(n_nonterminal),
      assist_step_reward_(assist_step_reward),
      terminal_reward_(terminal_reward) {
  if (n_ < 1 || n_ % 2 == 0) {
    throw ContractViolation(
        "randomwalk: number of non-terminal states must be a positive odd "
        "integer, got " +
        std::to_string(n_));
  }
  spec_.state_dim = 1;
  spec_.action_dim = 0;
  spec_.gamma = 1.0;
  spec_.horizon = kStepCap;
  spec_.validate();
}

RandomWalkEnv RandomWalkEnv::from_total_states(int total_states) {
  return RandomWalkEnv(total_states - 2);
}

Vector RandomWalkEnv::reset(RngStream& /*rng*/) const {
  return Vector::Constant(1, static_cast<double>(center()));
}

DualRewardStep RandomWalkEnv::step_direction(int state, bool move_right) const {
  if (is_terminal(state)) {
    throw ContractViolation("randomwalk: step called on terminal state " +
                            std::to_string(state));
  }
  const int next = state + (move_right ? 1 : -1);
  DualRewardStep out;
  out.next_state = Vector::Constant(1, static_cast<double>(next));
  const bool right_terminal = next == n_ + 1;
  out.r_target = right_terminal ? terminal_reward_ : 0.0;
  if (right_terminal) {
    out.r_assist = terminal_reward_;
  } else {
    out.r_assist = move_right ? assist_step_reward_ : 0.0;
  }
  out.terminated = is_terminal(next);
  return out;
}

DualRewardStep RandomWalkEnv::step(const Vector& state, const Vector& action,
                                   RngStream& rng) const {
  check_step_shapes(state, action);
  return step_direction(static_cast<int>(state[0]), rng.coin());
}

namespace {

// Expected one-step reward from non-terminal state i (1-based).
double expected_reward(const RandomWalkEnv& env, RewardChoice reward, int i) {
  const DualRewardStep left = env.step_direction(i, false);
  const DualRewardStep right = env.step_direction(i, true);
  return 0.5 * reward.select(left) + 0.5 * reward.select(right);
}

}  // namespace

Vector rw_true_values(const RandomWalkEnv& env, RewardChoice reward) {
  // v_i - v_{i-1}/2 - v_{i+1}/2 = rbar_i with v_0 = v_{n+1} = 0.
  // Thomas algorithm on the (-1/2, 1, -1/2) tridiagonal system.
  const int n = env.n_nonterminal();
  constexpr double kOff = -0.5;
  std::vector<double> c_prime(n), d_prime(n);
  for (int k = 0; k < n; ++k) {
    const double rhs = expected_reward(env, reward, k + 1);
    if (k == 0) {
      c_prime[k] = kOff;
      d_prime[k] = rhs;
    } else {
      const double denom = 1.0 - kOff * c_prime[k - 1];
      c_prime[k] = kOff / denom;
      d_prime[k] = (rhs - kOff * d_prime[k - 1]) / denom;
    }
  }
  Vector v(n);
  v[n - 1] = d_prime[n - 1];
  for (int k = n - 2; k >= 0; --k) v[k] = d_prime[k] - c_prime[k] * v[k + 1];
  return v;
}

double rw_bellman_residual(const RandomWalkEnv& env, RewardChoice reward,
                           const Vector& values) {
  const int n = env.n_nonterminal();
  if (values.size() != n)
    throw ContractViolation("rw_bellman_residual: length mismatch");
  auto v = [&](int i) { return (i <= 0 || i > n) ? 0.0 : values[i - 1]; };
  double worst = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double backup = expected_reward(env, reward, i) +
                          0.5 * v(i - 1) + 0.5 * v(i + 1);
    worst = std::max(worst, std::abs(values[i - 1] - backup));
  }
  return worst;
}

double rms_error(const Vector& values, const Vector& reference) {
  if (values.size() != reference.size()) {
    throw ContractViolation("rms_error: length mismatch (" +
                            std::to_string(values.size()) + " vs " +
                            std::to_string(reference.size()) + ")");
  }
  if (values.size() == 0) throw ContractViolation("rms_error: empty input");
  return std::sqrt((values - reference).squaredNorm() /
                   static_cast<double>(values.size()));
}

}  // namespace taexplore
