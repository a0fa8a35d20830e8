#include <gtest/gtest.h>

#include <cmath>

#include "taexplore/four_tank.hpp"
#include "taexplore/mdp.hpp"
#include "taexplore/random_walk.hpp"
#include "taexplore/temp_control.hpp"

namespace taexplore {
namespace {

Trajectory make_trajectory(const std::vector<double>& targets,
                           const std::vector<double>& assists) {
  Trajectory t;
  t.states.push_back(Vector::Zero(1));
  for (std::size_t i = 0; i < targets.size(); ++i) {
    DualRewardStep s;
    s.next_state = Vector::Zero(1);
    s.r_target = targets[i];
    s.r_assist = assists[i];
    t.steps.push_back(s);
    t.states.push_back(s.next_state);
  }
  return t;
}

TEST(EpisodeReturn, UndiscountedSum) {
  const auto t = make_trajectory({1, 1, 1}, {0, 0, 0});
  EXPECT_DOUBLE_EQ(episode_return(t, 1.0, RewardChoice::target()), 3.0);
}

TEST(EpisodeReturn, Discounted) {
  const auto t = make_trajectory({1, 1}, {0, 0});
  EXPECT_DOUBLE_EQ(episode_return(t, 0.5, RewardChoice::target()), 1.5);
}

TEST(EpisodeReturn, EmptyTrajectoryIsRejected) {
  Trajectory t;
  EXPECT_THROW(episode_return(t, 1.0, RewardChoice::target()),
               ContractViolation);
}

TEST(EpisodeReturn, BlendIsLinearAndExactAtZero) {
  RngStream rng(7, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int len = 1 + static_cast<int>(rng.uniform() * 50);
    std::vector<double> rt(len), ra(len);
    for (int i = 0; i < len; ++i) {
      rt[i] = rng.uniform(-100, 10);
      ra[i] = rng.uniform(-100, 10);
    }
    const auto t = make_trajectory(rt, ra);
    const double gamma = rng.uniform();
    const double beta = rng.uniform();
    const double target = episode_return(t, gamma, RewardChoice::target());
    const double assist = episode_return(t, gamma, RewardChoice::assist());
    EXPECT_EQ(episode_return(t, gamma, RewardChoice::blended(0.0)), target);
    EXPECT_NEAR(episode_return(t, gamma, RewardChoice::blended(beta)),
                beta * assist + (1 - beta) * target, 1e-12 * (1 + std::abs(target) + std::abs(assist)));
  }
}

TEST(EnvSpec, ValidatesRanges) {
  EnvSpec ok;
  EXPECT_NO_THROW(ok.validate());
  EnvSpec bad_gamma;
  bad_gamma.gamma = 1.5;
  EXPECT_THROW(bad_gamma.validate(), ContractViolation);
  EnvSpec bad_horizon;
  bad_horizon.horizon = 0;
  EXPECT_THROW(bad_horizon.validate(), ContractViolation);
  EnvSpec bad_count;
  bad_count.episode_count = 0;
  EXPECT_THROW(bad_count.validate(), ContractViolation);
}

TEST(RngStream, SameSeedAndStreamReplay) {
  RngStream a(42, 3), b(42, 3), c(42, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    differs |= x != c.normal();
  }
  EXPECT_TRUE(differs);
}

TEST(RngStream, PurposesAndRunsAreDistinctStreams) {
  const auto s1 = make_stream(1, 0, StreamPurpose::kInitState);
  const auto s2 = make_stream(1, 0, StreamPurpose::kDynamicsNoise);
  const auto s3 = make_stream(1, 1, StreamPurpose::kInitState);
  EXPECT_NE(s1.stream_id(), s2.stream_id());
  EXPECT_NE(s1.stream_id(), s3.stream_id());
}

TEST(EnvReset, RandomWalkStartsAtCenter) {
  for (int total : {5, 11, 33}) {
    const auto env = RandomWalkEnv::from_total_states(total);
    RngStream rng(1, 1);
    const Vector s = env.reset(rng);
    ASSERT_EQ(s.size(), 1);
    EXPECT_EQ(s[0], (total - 1) / 2);
  }
}

TEST(EnvReset, TempControlReplaysSeededNormals) {
  TempControlEnv env;
  RngStream rng(99, 5), replay(99, 5);
  const Vector s = env.reset(rng);
  ASSERT_EQ(s.size(), 3);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(s[i], replay.normal());
}

TEST(EnvReset, FourTankLevelsInBounds) {
  FourTankEnv env;
  RngStream rng(3, 3);
  const Vector s = env.reset(rng);
  ASSERT_EQ(s.size(), 4);
  EXPECT_TRUE((s.array() >= 3.0).all() && (s.array() <= 30.0).all());
}

TEST(EnvStep, DimensionMismatchIsContractViolation) {
  TempControlEnv env;
  RngStream rng(1, 1);
  EXPECT_THROW(env.step(Vector::Zero(3), Vector::Zero(2), rng),
               ContractViolation);
  EXPECT_THROW(env.step(Vector::Zero(2), Vector::Zero(3), rng),
               ContractViolation);
}

TEST(EnvStep, MrpIgnoresAction) {
  const auto env = RandomWalkEnv::from_total_states(5);
  RngStream a(5, 5), b(5, 5);
  const auto s1 = env.step(Vector::Constant(1, 2.0), Vector(), a);
  const auto s2 = env.step(Vector::Constant(1, 2.0), Vector::Ones(4), b);
  EXPECT_EQ(s1.next_state, s2.next_state);
  EXPECT_EQ(s1.r_target, s2.r_target);
}

TEST(Rollout, DeterministicAndTerminationIsAbsorbing) {
  const auto env = RandomWalkEnv::from_total_states(11);
  auto none = [](const Vector&) { return Vector(); };
  for (int seed = 0; seed < 20; ++seed) {
    RngStream i1(seed, 1), d1(seed, 2), i2(seed, 1), d2(seed, 2);
    const Trajectory a = rollout(env, none, i1, d1);
    const Trajectory b = rollout(env, none, i2, d2);
    ASSERT_EQ(a.steps.size(), b.steps.size());
    EXPECT_EQ(a.states.size(), a.steps.size() + 1);
    for (std::size_t k = 0; k < a.steps.size(); ++k) {
      EXPECT_EQ(a.steps[k].next_state, b.steps[k].next_state);
      EXPECT_EQ(a.steps[k].terminated, k + 1 == a.steps.size());
    }
  }
}

TEST(Rollout, TempControlRunsFullHorizon) {
  TempControlEnv env;
  RngStream i(1, 1), d(1, 2);
  auto zero = [](const Vector&) { return Vector::Zero(3); };
  const Trajectory t = rollout(env, zero, i, d);
  EXPECT_EQ(t.steps.size(), 100u);
  EXPECT_EQ(t.actions.size(), 100u);
}

}  // namespace
}  // namespace taexplore
