#pragma once

#include <cstdint>
#include <vector>

#include "taexplore/mdp.hpp"
#include "taexplore/mlp.hpp"
#include "taexplore/schedule.hpp"

namespace taexplore {

struct PpoConfig {
  int minibatch_size = 512;
  int epochs_per_update = 10;
  double lr = 0.00025;
  double gamma = 0.99;
  double gae_lambda = 0.9;
  double clip_epsilon = 0.2;
  int rollout_min_steps = 2048;
  double value_loss_coef = 0.5;
  double entropy_coef = 0.0;
  double max_grad_norm = 0.5;
  std::vector<int> hidden_sizes = {512, 256, 64};
  double init_log_spread = 0.0;

  void validate() const;
};

struct RolloutRecord {
  Vector state;
  Vector raw_action;   // pre-clamp Gaussian sample
  double log_prob = 0.0;
  double reward = 0.0;  // blended with the owning episode's beta
  double value = 0.0;
  bool done = false;         // environment termination
  bool episode_end = false;  // termination or horizon cut
  double bootstrap_value = 0.0;  // v(s_T) for a horizon cut, else unused
  double beta = 0.0;
};

class RolloutBuffer {
 public:
  void push(RolloutRecord record) { records_.push_back(std::move(record)); }
  void clear() { records_.clear(); }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const RolloutRecord& operator[](std::size_t i) const { return records_[i]; }
  const std::vector<RolloutRecord>& records() const { return records_; }

 private:
  std::vector<RolloutRecord> records_;
};

struct PolicySample {
  Vector raw;
  Vector action;  // raw mapped into the environment's action range
  double log_prob = 0.0;
};

// Log density of x under N(mean, diag(exp(log_spread))^2).
double gaussian_log_prob(const Vector& mean, const Vector& log_spread,
                         const Vector& x);

PolicySample policy_sample(const MlpParams& actor, const Vector& state,
                           const Environment& env, RngStream& rng);

// Log-probabilities of stored raw actions under the current actor, batched.
Vector evaluate_log_probs(const MlpParams& actor, const Matrix& states,
                          const Matrix& raw_actions);

struct AdvantageEstimate {
  Vector advantages;
  Vector value_targets;
};

// delta_t = r_t + gamma * v(s_{t+1}) * (1 - done_t) - v(s_t)
// A_t = delta_t + gamma * lambda * (1 - end_t) * A_{t+1}
AdvantageEstimate gae_compute(const RolloutBuffer& buffer, double gamma,
                              double lambda);

// Zero mean, unit (population) variance.
void normalize_advantages(Vector& advantages);

// min(ratio * A, clip(ratio, 1 - eps, 1 + eps) * A)
double clipped_surrogate(double ratio, double advantage, double epsilon);

struct PpoAgent {
  MlpParams actor;
  MlpParams critic;
  AdamState actor_opt;
  AdamState critic_opt;
};

PpoAgent make_agent(int state_dim, int action_dim, const PpoConfig& config,
                    RngStream& weight_rng);

struct UpdateDiagnostics {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  // Mean |ratio - 1| over the first minibatch of the first epoch.
  double first_minibatch_ratio_deviation = 0.0;
  int minibatches = 0;
};

UpdateDiagnostics ppo_update(PpoAgent& agent, const RolloutBuffer& buffer,
                             const PpoConfig& config, RngStream& shuffle_rng);

struct EpisodeStats {
  int episode = 0;
  double beta = 0.0;
  double target_return = 0.0;  // undiscounted sum of r_target
  double assist_return = 0.0;
  int length = 0;
  int violations = 0;  // steps whose assistant reward signalled a violation
};

struct PpoRunResult {
  std::vector<EpisodeStats> episodes;
  std::vector<UpdateDiagnostics> updates;
  PpoAgent agent;
};

PpoRunResult ppo_train(const Environment& env, const BetaSchedule& sched,
                       const PpoConfig& config, int episodes,
                       std::uint64_t master_seed, int run = 0);

}  // namespace taexplore
