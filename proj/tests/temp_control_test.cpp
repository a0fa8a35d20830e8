#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "taexplore/temp_control.hpp"

namespace taexplore {
namespace {

TempControlEnv noiseless(double omega = 1.0) {
  TempControlParams p;
  p.noise_std = 0.0;
  p.omega = omega;
  return TempControlEnv(p);
}

TEST(TempControl, MatrixMatchesPublishedValues) {
  const Eigen::Matrix3d a = TempControlEnv::dynamics_matrix();
  Eigen::Matrix3d expected;
  expected << 1.01, 0.01, 0, 0.01, 1.01, 0.01, 0, 0.01, 1.01;
  EXPECT_EQ(a, expected);
}

TEST(TempControl, NoiselessStepIsMatrixProduct) {
  const auto env = noiseless();
  RngStream rng(1, 1);
  const auto step = env.step(Vector::Ones(3), Vector::Zero(3), rng);
  EXPECT_NEAR(step.next_state[0], 1.02, 1e-15);
  EXPECT_NEAR(step.next_state[1], 1.03, 1e-15);
  EXPECT_NEAR(step.next_state[2], 1.02, 1e-15);
  EXPECT_FALSE(step.terminated);
}

TEST(TempControl, SatisfiedRewards) {
  const auto env = noiseless(1.0);
  RngStream rng(1, 1);
  const auto step = env.step(Vector::Zero(3), Vector::Ones(3), rng);
  EXPECT_DOUBLE_EQ(step.r_target, -3.0);
  EXPECT_EQ(step.r_assist, 0.0);
}

TEST(TempControl, ViolationRewards) {
  const auto env = noiseless();
  const auto step = env.evaluate(Vector::Zero(3), Vector{{2.5, 0.0, 0.0}});
  EXPECT_EQ(step.r_target, -100.0);
  EXPECT_EQ(step.r_assist, -100.0);
  EXPECT_FALSE(step.terminated);
}

TEST(TempControl, PenaltyIsTheOnlyDifference) {
  const auto env = noiseless(10.0);
  RngStream rng(4, 4);
  for (int i = 0; i < 1000; ++i) {
    Vector a(3);
    for (int d = 0; d < 3; ++d) a[d] = rng.uniform(-1, 1);
    const auto ok = env.evaluate(a, Vector::Zero(3));
    const auto bad = env.evaluate(a, Vector::Constant(3, 3.0));
    ASSERT_EQ(bad.r_target, ok.r_target - 100.0);
    ASSERT_LE(ok.r_target, 0.0);
    ASSERT_TRUE(ok.r_assist == 0.0 && bad.r_assist == -100.0);
  }
}

TEST(TempControl, UncontrolledSystemIsUnstable) {
  const Eigen::Matrix3d a = TempControlEnv::dynamics_matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(a);
  EXPECT_NEAR(eig.eigenvalues().maxCoeff(), 1.01 + 0.01 * std::sqrt(2.0), 1e-12);
  // Tridiagonal Toeplitz eigenvalues 1.01 + 0.02 cos(k pi / 4).
  for (int k = 1; k <= 3; ++k) {
    const double lam = 1.01 + 0.02 * std::cos(k * M_PI / 4.0);
    EXPECT_NEAR((a - lam * Eigen::Matrix3d::Identity()).determinant(), 0.0, 1e-12);
  }
  const auto env = noiseless();
  RngStream rng(1, 1);
  Vector s = Vector::Ones(3);
  double prev = s.norm();
  for (int t = 1; t <= 50; ++t) {
    s = env.step(s, Vector::Zero(3), rng).next_state;
    ASSERT_GT(s.norm(), prev) << "t=" << t;
    prev = s.norm();
  }
}

TEST(TempControl, ResetIsStandardNormal) {
  TempControlEnv env;
  RngStream rng(31, 7);
  const int n = 100000;
  Eigen::Vector3d sum = Eigen::Vector3d::Zero(), sq = Eigen::Vector3d::Zero();
  for (int i = 0; i < n; ++i) {
    const Vector s = env.reset(rng);
    sum += s;
    sq += s.cwiseProduct(s);
  }
  for (int d = 0; d < 3; ++d) {
    const double mean = sum[d] / n;
    const double var = sq[d] / n - mean * mean;
    EXPECT_NEAR(mean, 0.0, 3.0 / std::sqrt(n));
    // Var of the sample variance of N(0,1) is 2 / n.
    EXPECT_NEAR(var, 1.0, 3.0 * std::sqrt(2.0 / n));
  }
}

TEST(TempControl, NoiseHasPublishedCovariance) {
  TempControlEnv env;
  RngStream rng(5, 5);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = env.step(Vector::Zero(3), Vector::Zero(3), rng).next_state[1];
    sum += e;
    sq += e * e;
  }
  EXPECT_NEAR(sum / n, 0.0, 3 * 0.01 / std::sqrt(n));
  EXPECT_NEAR(sq / n, 1e-4, 3 * 1e-4 * std::sqrt(2.0 / n));
}

TEST(TempControl, ActionMapClampsToUnitBox) {
  TempControlEnv env;
  const Vector a = env.map_action(Vector{{-3.0, 0.25, 7.0}});
  EXPECT_EQ(a, (Vector{{-1.0, 0.25, 1.0}}));
}

}  // namespace
}  // namespace taexplore
