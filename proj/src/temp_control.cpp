#include "taexplore/temp_control.hpp"

namespace taexplore {

TempControlEnv::TempControlEnv(TempControlParams params)
    : params_(params), A_(dynamics_matrix()) {
  if (!(params_.noise_std >= 0.0))
    throw ContractViolation("tempcontrol: noise_std must be >= 0");
  if (!(params_.omega >= 0.0))
    throw ContractViolation("tempcontrol: omega must be >= 0");
  if (!(params_.action_scale > 0.0))
    throw ContractViolation("tempcontrol: action_scale must be > 0");
  spec_.state_dim = 3;
  spec_.action_dim = 3;
  spec_.gamma = params_.gamma;
  spec_.horizon = params_.horizon;
  spec_.validate();
}

Eigen::Matrix3d TempControlEnv::dynamics_matrix() {
  Eigen::Matrix3d a;
  a << 1.01, 0.01, 0.00,
       0.01, 1.01, 0.01,
       0.00, 0.01, 1.01;
  return a;
}

Vector TempControlEnv::reset(RngStream& rng) const {
  Vector s(3);
  for (int i = 0; i < 3; ++i) s[i] = rng.normal();
  return s;
}

bool TempControlEnv::satisfied(const Vector& state) const {
  return (state.array().abs() <= params_.state_bound).all();
}

DualRewardStep TempControlEnv::evaluate(const Vector& action,
                                        Vector next_state) const {
  DualRewardStep out;
  const bool ok = satisfied(next_state);
  out.next_state = std::move(next_state);
  out.r_assist = ok ? 0.0 : -params_.penalty;
  out.r_target = -params_.omega * action.squaredNorm() + out.r_assist;
  out.terminated = false;
  return out;
}

DualRewardStep TempControlEnv::step(const Vector& state, const Vector& action,
                                    RngStream& rng) const {
  check_step_shapes(state, action);
  Vector next = A_ * state + action;
  if (params_.noise_std > 0.0) {
    for (int i = 0; i < 3; ++i) next[i] += params_.noise_std * rng.normal();
  }
  return evaluate(action, std::move(next));
}

Vector TempControlEnv::map_action(const Vector& policy_output) const {
  return params_.action_scale * policy_output.cwiseMax(-1.0).cwiseMin(1.0);
}

}  // namespace taexplore
