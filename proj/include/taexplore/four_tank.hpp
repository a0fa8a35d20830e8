#pragma once

#include <array>

#include "taexplore/mdp.hpp"

namespace taexplore {

// Coupled four-tank system with two pumps. Levels in cm, pump voltages in V.
//
//   s1' = -c1 sqrt(s1) + c2 sqrt(s3) + c3 sqrt(s4)
//   s2' = -c4 sqrt(s2) + c5 sqrt(s3) + c6 sqrt(s4)
//   s3' = -c7 sqrt(s3) + c8 a1
//   s4' = -c9 sqrt(s4) + c10 a2
//
// kDirect applies the map as written; kIncremental integrates
// s' = s + dt * f(s, a) instead. sqrt arguments are clamped at 0.
// The episode terminates on the first step whose successor leaves
// [level_min, level_max]^4.
struct FourTankParams {
  enum class Integration { kDirect, kIncremental };

  // Defaults: a constant 6 V on both pumps keeps every level inside
  // [3, 30] from any admissible initial state (fixed point near
  // s = (16.9, 16.3, 22.3, 22.3)); 0 V empties tanks 3 and 4 in one step.
  std::array<double, 10> c = {0.5, 2.5, 1.5, 0.5, 1.5, 2.5, 1.0, 4.5, 1.0, 4.5};
  double omega = 1.0;
  double level_min = 3.0;
  double level_max = 30.0;
  double action_min = 0.0;
  double action_max = 12.0;
  double penalty = 100.0;
  int horizon = 100;
  double gamma = 0.99;
  Integration integration = Integration::kDirect;
  double dt = 1.0;
};

class FourTankEnv final : public Environment {
 public:
  explicit FourTankEnv(FourTankParams params = {});

  const EnvSpec& spec() const override { return spec_; }
  // Levels iid uniform on [level_min, level_max].
  Vector reset(RngStream& rng) const override;
  // Deterministic; rng is unused.
  DualRewardStep step(const Vector& state, const Vector& action,
                      RngStream& rng) const override;
  // Voltage = midpoint + half-range * clamp(x, -1, 1), i.e. 6 (x + 1).
  Vector map_action(const Vector& policy_output) const override;
  std::string name() const override { return "fourtank"; }

  DualRewardStep step(const Vector& state, const Vector& action) const;
  Vector clamp_action(const Vector& action) const;
  Vector dynamics(const Vector& state, const Vector& clamped_action) const;
  bool satisfied(const Vector& state) const;

  const FourTankParams& params() const { return params_; }

 private:
  FourTankParams params_;
  EnvSpec spec_;
};

}  // namespace taexplore
