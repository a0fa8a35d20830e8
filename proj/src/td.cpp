#include "taexplore/td.hpp"

#include "taexplore/parallel.hpp"

namespace taexplore {

ValueTable ValueTable::zeros(int total_states, double alpha,
                             StepSizeRule rule) {
  if (total_states < 3)
    throw ContractViolation("ValueTable: need at least one non-terminal state");
  ValueTable t;
  t.values = Vector::Zero(total_states);
  t.alpha = alpha;
  t.rule = rule;
  t.visits.assign(total_states, 0);
  return t;
}

void td0_update(ValueTable& table, int s, double r, int s_next, double gamma) {
  if (table.is_terminal(s))
    throw ContractViolation("td0_update: s must be non-terminal");
  if (s_next < 0 || s_next >= table.values.size())
    throw ContractViolation("td0_update: s_next out of range");
  double alpha = table.alpha;
  if (table.rule == StepSizeRule::kVisitDecayed) {
    alpha = 1.0 / (1.0 + static_cast<double>(table.visits[s]));
  }
  ++table.visits[s];
  const double target = r + gamma * table.values[s_next];
  table.values[s] += alpha * (target - table.values[s]);
}

std::vector<double> run_td_single(const RandomWalkEnv& env,
                                  const BetaSchedule& sched, int episodes,
                                  std::uint64_t master_seed, int run,
                                  const TdOptions& options) {
  if (episodes < 1) throw ContractViolation("run_td: episodes must be >= 1");
  const Vector reference = rw_true_values(env, RewardChoice::target());
  ValueTable table = ValueTable::zeros(env.n_nonterminal() + 2, options.alpha,
                                       options.rule);
  RngStream moves = make_stream(master_seed, static_cast<std::uint64_t>(run),
                                StreamPurpose::kDynamicsNoise);
  std::vector<double> rms(episodes);
  for (int e = 0; e < episodes; ++e) {
    const double beta = beta_at(sched, e);
    td_episode(table, env, beta, [&moves] { return moves.coin(); });
    rms[e] = rms_error(table.nonterminal(), reference);
  }
  return rms;
}

TdExperimentResult run_td_experiment(const RandomWalkEnv& env,
                                     const BetaSchedule& sched, int episodes,
                                     int runs, std::uint64_t master_seed,
                                     const TdOptions& options) {
  if (runs < 1) throw ContractViolation("run_td: runs must be >= 1");
  sched.validate();
  TdExperimentResult result;
  result.run_rms.resize(runs);
  parallel_for(runs, options.workers, [&](int run) {
    result.run_rms[run] =
        run_td_single(env, sched, episodes, master_seed, run, options);
  });
  result.betas.resize(episodes);
  result.mean_rms.assign(episodes, 0.0);
  for (int e = 0; e < episodes; ++e) {
    result.betas[e] = beta_at(sched, e);
    for (int r = 0; r < runs; ++r) result.mean_rms[e] += result.run_rms[r][e];
    result.mean_rms[e] /= static_cast<double>(runs);
  }
  return result;
}

}  // namespace taexplore
