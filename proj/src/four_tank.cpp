#include "taexplore/four_tank.hpp"

#include <cmath>

namespace taexplore {

FourTankEnv::FourTankEnv(FourTankParams params) : params_(params) {
  for (std::size_t i = 0; i < params_.c.size(); ++i) {
    if (!(params_.c[i] > 0.0)) {
      throw ContractViolation("fourtank: c" + std::to_string(i + 1) +
                              " must be > 0");
    }
  }
  if (!(params_.level_min < params_.level_max))
    throw ContractViolation("fourtank: level_min must be < level_max");
  if (!(params_.action_min < params_.action_max))
    throw ContractViolation("fourtank: action_min must be < action_max");
  if (!(params_.dt > 0.0)) throw ContractViolation("fourtank: dt must be > 0");
  spec_.state_dim = 4;
  spec_.action_dim = 2;
  spec_.gamma = params_.gamma;
  spec_.horizon = params_.horizon;
  spec_.validate();
}

Vector FourTankEnv::reset(RngStream& rng) const {
  Vector s(4);
  for (int i = 0; i < 4; ++i)
    s[i] = rng.uniform(params_.level_min, params_.level_max);
  return s;
}

Vector FourTankEnv::clamp_action(const Vector& action) const {
  return action.cwiseMax(params_.action_min).cwiseMin(params_.action_max);
}

Vector FourTankEnv::dynamics(const Vector& s, const Vector& a) const {
  const auto& c = params_.c;
  auto root = [](double x) { return std::sqrt(std::max(x, 0.0)); };
  const double r1 = root(s[0]), r2 = root(s[1]), r3 = root(s[2]),
               r4 = root(s[3]);
  Vector f(4);
  f[0] = -c[0] * r1 + c[1] * r3 + c[2] * r4;
  f[1] = -c[3] * r2 + c[4] * r3 + c[5] * r4;
  f[2] = -c[6] * r3 + c[7] * a[0];
  f[3] = -c[8] * r4 + c[9] * a[1];
  if (params_.integration == FourTankParams::Integration::kIncremental) {
    return s + params_.dt * f;
  }
  return f;
}

bool FourTankEnv::satisfied(const Vector& s) const {
  return (s.array() >= params_.level_min).all() &&
         (s.array() <= params_.level_max).all();
}

DualRewardStep FourTankEnv::step(const Vector& state,
                                 const Vector& action) const {
  check_step_shapes(state, action);
  const Vector a = clamp_action(action);
  DualRewardStep out;
  out.next_state = dynamics(state, a);
  const bool ok = satisfied(out.next_state);
  out.r_assist = ok ? 0.0 : -params_.penalty;
  out.r_target = -params_.omega * a.squaredNorm() + out.r_assist;
  out.terminated = !ok;
  return out;
}

DualRewardStep FourTankEnv::step(const Vector& state, const Vector& action,
                                 RngStream& /*rng*/) const {
  return step(state, action);
}

Vector FourTankEnv::map_action(const Vector& policy_output) const {
  const double mid = 0.5 * (params_.action_min + params_.action_max);
  const double half = 0.5 * (params_.action_max - params_.action_min);
  return (mid + half * policy_output.cwiseMax(-1.0).cwiseMin(1.0).array())
      .matrix();
}

}  // namespace taexplore
