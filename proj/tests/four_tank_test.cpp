#include <gtest/gtest.h>

#include <cmath>

#include "taexplore/four_tank.hpp"

namespace taexplore {
namespace {

TEST(FourTank, ZeroVoltageDrainsLowerTanks) {
  FourTankEnv env;
  const Vector s{{10.0, 12.0, 16.0, 9.0}};
  const auto step = env.step(s, Vector::Zero(2));
  const auto& c = env.params().c;
  EXPECT_DOUBLE_EQ(step.next_state[2], -c[6] * 4.0);
  EXPECT_DOUBLE_EQ(step.next_state[3], -c[8] * 3.0);
  EXPECT_TRUE(step.terminated);
  EXPECT_EQ(step.r_assist, -100.0);
  EXPECT_EQ(step.r_target, -100.0);
}

TEST(FourTank, FullVoltageCostWhenSatisfied) {
  FourTankParams p;
  p.c[7] = 2.0;
  p.c[9] = 2.0;
  FourTankEnv env(p);
  const auto step = env.step(Vector::Constant(4, 16.0), Vector::Constant(2, 12.0));
  ASSERT_FALSE(step.terminated);
  EXPECT_EQ(step.r_target, -288.0);
  EXPECT_EQ(step.r_assist, 0.0);
}

TEST(FourTank, SymmetricParametersGiveSymmetricUpperTanks) {
  FourTankParams p;
  p.c = {0.7, 1.9, 2.1, 0.7, 1.9, 2.1, 1.0, 4.0, 1.3, 3.5};
  FourTankEnv env(p);
  for (double k : {3.0, 7.5, 16.0, 29.0}) {
    const auto step = env.step(Vector::Constant(4, k), Vector{{5.0, 7.0}});
    EXPECT_EQ(step.next_state[0], step.next_state[1]);
  }
}

TEST(FourTank, DynamicsAreDeterministic) {
  FourTankEnv env;
  RngStream r1(1, 1), r2(2, 2);
  const Vector s{{5.0, 20.0, 11.0, 29.0}};
  const Vector a{{3.3, 8.1}};
  EXPECT_EQ(env.step(s, a, r1).next_state, env.step(s, a, r2).next_state);
}

TEST(FourTank, PenaltyIsTheOnlyDifference) {
  FourTankEnv env;
  RngStream rng(3, 3);
  for (int i = 0; i < 2000; ++i) {
    Vector s(4);
    for (int d = 0; d < 4; ++d) s[d] = rng.uniform(3, 30);
    const Vector a{{rng.uniform(0, 12), rng.uniform(0, 12)}};
    const auto step = env.step(s, a);
    const double cost = -env.clamp_action(a).squaredNorm();
    if (step.terminated) {
      ASSERT_EQ(step.r_target, cost - 100.0);
    } else {
      ASSERT_EQ(step.r_target, cost);
    }
  }
}

TEST(FourTank, ClampIsIdempotentAndApplied) {
  FourTankEnv env;
  const Vector a{{-4.0, 15.0}};
  const Vector once = env.clamp_action(a);
  EXPECT_EQ(once, (Vector{{0.0, 12.0}}));
  EXPECT_EQ(env.clamp_action(once), once);
  const Vector s = Vector::Constant(4, 16.0);
  EXPECT_EQ(env.step(s, a).next_state, env.step(s, once).next_state);
}

TEST(FourTank, PolicyOutputMapsOntoVoltageRange) {
  FourTankEnv env;
  EXPECT_EQ(env.map_action(Vector{{-1.0, 1.0}}), (Vector{{0.0, 12.0}}));
  EXPECT_EQ(env.map_action(Vector{{0.0, -5.0}}), (Vector{{6.0, 0.0}}));
}

// Constant 6 V on both pumps must keep every level in range for the whole
// horizon, starting from corners of the admissible box and random states.
TEST(FourTank, DefaultsAdmitMidRangeFeasiblePolicy) {
  FourTankEnv env;
  RngStream rng(17, 1);
  std::vector<Vector> starts;
  for (int mask = 0; mask < 16; ++mask) {
    Vector s(4);
    for (int d = 0; d < 4; ++d) s[d] = (mask >> d) & 1 ? 30.0 : 3.0;
    starts.push_back(s);
  }
  for (int i = 0; i < 1000; ++i) starts.push_back(env.reset(rng));
  for (const Vector& start : starts) {
    Vector s = start;
    for (int t = 0; t < 100; ++t) {
      const auto step = env.step(s, Vector::Constant(2, 6.0));
      ASSERT_FALSE(step.terminated) << "t=" << t << " start=" << start.transpose();
      s = step.next_state;
    }
  }
}

TEST(FourTank, ResetIsUniformOnLevelBox) {
  FourTankEnv env;
  RngStream rng(23, 4);
  const int n = 100000;
  Eigen::Vector4d sum = Eigen::Vector4d::Zero();
  for (int i = 0; i < n; ++i) {
    const Vector s = env.reset(rng);
    ASSERT_TRUE((s.array() >= 3.0).all() && (s.array() <= 30.0).all());
    sum += s;
  }
  const double sd = 27.0 / std::sqrt(12.0);
  for (int d = 0; d < 4; ++d)
    EXPECT_NEAR(sum[d] / n, 16.5, 3 * sd / std::sqrt(n));
}

TEST(FourTank, IncrementalModeIntegratesRates) {
  FourTankParams p;
  p.integration = FourTankParams::Integration::kIncremental;
  p.dt = 0.1;
  FourTankEnv inc(p);
  FourTankEnv direct;
  const Vector s{{10.0, 12.0, 16.0, 9.0}};
  const Vector a{{6.0, 6.0}};
  const Vector f = direct.dynamics(s, a);
  const auto step = inc.step(s, a);
  EXPECT_TRUE(step.next_state.isApprox(s + 0.1 * f, 1e-14));
}

TEST(FourTank, RejectsNonPositiveCoefficients) {
  FourTankParams p;
  p.c[4] = 0.0;
  EXPECT_THROW(FourTankEnv{p}, ContractViolation);
}

TEST(FourTank, NegativeLevelsAreGuarded) {
  FourTankEnv env;
  const auto step = env.step(Vector{{-1.0, 4.0, 4.0, 4.0}}, Vector::Constant(2, 6.0));
  EXPECT_TRUE(std::isfinite(step.next_state[0]));
}

}  // namespace
}  // namespace taexplore
