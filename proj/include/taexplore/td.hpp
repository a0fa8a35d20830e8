#pragma once

#include <cstdint>
#include <vector>

#include "taexplore/random_walk.hpp"
#include "taexplore/schedule.hpp"

namespace taexplore {

enum class StepSizeRule {
  kConstant,
  // alpha = 1 / (1 + prior visits of s). Test-only convergence mode.
  kVisitDecayed,
};

// Tabular state values; entries 0 and size-1 are terminals and stay 0.
struct ValueTable {
  Vector values;
  double alpha = 0.1;
  StepSizeRule rule = StepSizeRule::kConstant;
  std::vector<std::int64_t> visits;

  static ValueTable zeros(int total_states, double alpha = 0.1,
                          StepSizeRule rule = StepSizeRule::kConstant);

  // Values of the non-terminal states only.
  Vector nonterminal() const { return values.segment(1, values.size() - 2); }
  bool is_terminal(int s) const { return s <= 0 || s >= values.size() - 1; }
};

// v(s) += alpha * (r + gamma * v(s') - v(s)).
void td0_update(ValueTable& table, int s, double r, int s_next, double gamma);

// Runs one episode of online TD(0) on the blended reward. `coin` supplies the
// move direction (true = right) for each step. Returns the step count.
template <typename Coin>
int td_episode(ValueTable& table, const RandomWalkEnv& env, double beta,
               Coin&& coin) {
  int s = env.center();
  int steps = 0;
  while (!env.is_terminal(s)) {
    if (++steps > RandomWalkEnv::kStepCap) {
      throw ContractViolation("randomwalk: episode exceeded step cap");
    }
    const DualRewardStep step = env.step_direction(s, coin());
    const int s_next = static_cast<int>(step.next_state[0]);
    td0_update(table, s, blend(step.r_target, step.r_assist, beta), s_next,
               env.spec().gamma);
    s = s_next;
  }
  return steps;
}

struct TdOptions {
  double alpha = 0.1;
  StepSizeRule rule = StepSizeRule::kConstant;
  int workers = 1;
};

struct TdExperimentResult {
  std::vector<double> betas;                  // per episode
  std::vector<std::vector<double>> run_rms;   // [run][episode]
  std::vector<double> mean_rms;               // mean over runs
};

// RMS against the target-reward true values, recorded after each episode's
// updates. The table persists across episodes within a run.
std::vector<double> run_td_single(const RandomWalkEnv& env,
                                  const BetaSchedule& sched, int episodes,
                                  std::uint64_t master_seed, int run,
                                  const TdOptions& options = {});

TdExperimentResult run_td_experiment(const RandomWalkEnv& env,
                                     const BetaSchedule& sched, int episodes,
                                     int runs, std::uint64_t master_seed,
                                     const TdOptions& options = {});

}  // namespace taexplore
