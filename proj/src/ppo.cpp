#include "taexplore/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace taexplore {

namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

}  // namespace

void PpoConfig::validate() const {
  if (minibatch_size < 1) throw ContractViolation("ppo: minibatch_size >= 1");
  if (epochs_per_update < 1)
    throw ContractViolation("ppo: epochs_per_update >= 1");
  if (!(lr > 0.0)) throw ContractViolation("ppo: lr must be > 0");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw ContractViolation("ppo: gamma must lie in (0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0))
    throw ContractViolation("ppo: gae_lambda must lie in [0, 1]");
  if (!(clip_epsilon > 0.0))
    throw ContractViolation("ppo: clip_epsilon must be > 0");
  if (rollout_min_steps < 1)
    throw ContractViolation("ppo: rollout_min_steps >= 1");
  if (!(max_grad_norm > 0.0))
    throw ContractViolation("ppo: max_grad_norm must be > 0");
  for (int h : hidden_sizes)
    if (h < 1) throw ContractViolation("ppo: hidden sizes must be >= 1");
}

double gaussian_log_prob(const Vector& mean, const Vector& log_spread,
                         const Vector& x) {
  if (mean.size() != x.size() || log_spread.size() != x.size())
    throw ContractViolation("gaussian_log_prob: dimension mismatch");
  double lp = 0.0;
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    const double z = (x[d] - mean[d]) * std::exp(-log_spread[d]);
    lp += -0.5 * z * z - log_spread[d] - kHalfLog2Pi;
  }
  return lp;
}

PolicySample policy_sample(const MlpParams& actor, const Vector& state,
                           const Environment& env, RngStream& rng) {
  const Vector mean = mlp_forward(actor, state);
  PolicySample out;
  out.raw.resize(mean.size());
  for (Eigen::Index d = 0; d < mean.size(); ++d)
    out.raw[d] = mean[d] + std::exp(actor.log_spread[d]) * rng.normal();
  out.log_prob = gaussian_log_prob(mean, actor.log_spread, out.raw);
  out.action = env.map_action(out.raw);
  return out;
}

Vector evaluate_log_probs(const MlpParams& actor, const Matrix& states,
                          const Matrix& raw_actions) {
  const Matrix mean = mlp_forward(actor, states).output;
  Vector lp(states.cols());
  for (Eigen::Index j = 0; j < states.cols(); ++j)
    lp[j] = gaussian_log_prob(mean.col(j), actor.log_spread, raw_actions.col(j));
  return lp;
}

AdvantageEstimate gae_compute(const RolloutBuffer& buffer, double gamma,
                              double lambda) {
  const auto n = static_cast<Eigen::Index>(buffer.size());
  AdvantageEstimate est{Vector::Zero(n), Vector::Zero(n)};
  double next_adv = 0.0;
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    const RolloutRecord& rec = buffer[t];
    double next_value = 0.0;
    if (!rec.done) {
      if (rec.episode_end) {
        next_value = rec.bootstrap_value;
      } else if (t + 1 < n) {
        next_value = buffer[t + 1].value;
      }
    }
    const double delta = rec.reward + gamma * next_value - rec.value;
    const double carry = rec.episode_end ? 0.0 : next_adv;
    est.advantages[t] = delta + gamma * lambda * carry;
    next_adv = est.advantages[t];
  }
  for (Eigen::Index t = 0; t < n; ++t)
    est.value_targets[t] = est.advantages[t] + buffer[t].value;
  return est;
}

void normalize_advantages(Vector& advantages) {
  if (advantages.size() == 0) return;
  const double mean = advantages.mean();
  advantages.array() -= mean;
  const double std_dev = std::sqrt(advantages.squaredNorm() /
                                   static_cast<double>(advantages.size()));
  if (std_dev > 0.0) advantages /= std_dev;
}

double clipped_surrogate(double ratio, double advantage, double epsilon) {
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

PpoAgent make_agent(int state_dim, int action_dim, const PpoConfig& config,
                    RngStream& weight_rng) {
  config.validate();
  std::vector<int> actor_sizes{state_dim};
  actor_sizes.insert(actor_sizes.end(), config.hidden_sizes.begin(),
                     config.hidden_sizes.end());
  std::vector<int> critic_sizes = actor_sizes;
  actor_sizes.push_back(action_dim);
  critic_sizes.push_back(1);
  PpoAgent agent;
  agent.actor = mlp_init(actor_sizes, Activation::kRelu, Activation::kTanh,
                         weight_rng, action_dim);
  agent.actor.log_spread.setConstant(config.init_log_spread);
  agent.critic = mlp_init(critic_sizes, Activation::kRelu,
                          Activation::kIdentity, weight_rng);
  agent.actor_opt = AdamState::for_params(agent.actor, config.lr);
  agent.critic_opt = AdamState::for_params(agent.critic, config.lr);
  return agent;
}

UpdateDiagnostics ppo_update(PpoAgent& agent, const RolloutBuffer& buffer,
                             const PpoConfig& config, RngStream& shuffle_rng) {
  const auto n = static_cast<Eigen::Index>(buffer.size());
  if (n < config.rollout_min_steps || n == 0) {
    throw ContractViolation("ppo_update: buffer holds " + std::to_string(n) +
                            " records, need " +
                            std::to_string(config.rollout_min_steps));
  }
  const Eigen::Index state_dim = buffer[0].state.size();
  const Eigen::Index action_dim = buffer[0].raw_action.size();

  AdvantageEstimate est = gae_compute(buffer, config.gamma, config.gae_lambda);
  normalize_advantages(est.advantages);

  Matrix states(state_dim, n), actions(action_dim, n);
  Vector old_log_probs(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    states.col(t) = buffer[t].state;
    actions.col(t) = buffer[t].raw_action;
    old_log_probs[t] = buffer[t].log_prob;
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  UpdateDiagnostics diag;
  double clipped_count = 0.0;
  double sample_count = 0.0;
  for (int epoch = 0; epoch < config.epochs_per_update; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng.engine());
    for (Eigen::Index start = 0; start < n; start += config.minibatch_size) {
      const Eigen::Index b = std::min<Eigen::Index>(config.minibatch_size,
                                                    n - start);
      Matrix mb_states(state_dim, b), mb_actions(action_dim, b);
      Vector mb_old(b), mb_adv(b), mb_targets(b);
      for (Eigen::Index j = 0; j < b; ++j) {
        const Eigen::Index idx = order[start + j];
        mb_states.col(j) = states.col(idx);
        mb_actions.col(j) = actions.col(idx);
        mb_old[j] = old_log_probs[idx];
        mb_adv[j] = est.advantages[idx];
        mb_targets[j] = est.value_targets[idx];
      }
      const double inv_b = 1.0 / static_cast<double>(b);

      // Actor: maximize the clipped surrogate.
      const MlpCache actor_cache = mlp_forward(agent.actor, mb_states);
      const Matrix& mean = actor_cache.output;
      const Vector& log_spread = agent.actor.log_spread;
      const Vector inv_var = (-2.0 * log_spread).array().exp().matrix();
      Matrix mean_grad(action_dim, b);
      Vector spread_grad = Vector::Zero(action_dim);
      double policy_loss = 0.0;
      double ratio_dev = 0.0;
      for (Eigen::Index j = 0; j < b; ++j) {
        const double new_lp =
            gaussian_log_prob(mean.col(j), log_spread, mb_actions.col(j));
        const double log_ratio = new_lp - mb_old[j];
        const double ratio = std::exp(log_ratio);
        const double adv = mb_adv[j];
        policy_loss -= clipped_surrogate(ratio, adv, config.clip_epsilon);
        ratio_dev += std::abs(ratio - 1.0);
        diag.approx_kl += -log_ratio;
        const bool clipped = (adv >= 0.0 && ratio > 1.0 + config.clip_epsilon) ||
                             (adv < 0.0 && ratio < 1.0 - config.clip_epsilon);
        // d(-surrogate)/d(log_prob), averaged over the minibatch.
        const double dlogp = clipped ? 0.0 : -ratio * adv * inv_b;
        if (clipped) clipped_count += 1.0;
        sample_count += 1.0;
        const Vector diff = mb_actions.col(j) - mean.col(j);
        mean_grad.col(j) = dlogp * diff.cwiseProduct(inv_var);
        spread_grad.array() +=
            dlogp * (diff.array().square() * inv_var.array() - 1.0);
      }
      // Entropy bonus: d(-coef * sum log_spread) / d log_spread.
      spread_grad.array() -= config.entropy_coef;

      MlpParams actor_grad = mlp_backward(agent.actor, actor_cache, mean_grad);
      actor_grad.log_spread = spread_grad;
      clip_grad_norm(actor_grad, config.max_grad_norm);
      adam_step(agent.actor, actor_grad, agent.actor_opt);

      // Critic: squared error to the GAE value targets.
      const MlpCache critic_cache = mlp_forward(agent.critic, mb_states);
      const Vector residual =
          critic_cache.output.row(0).transpose() - mb_targets;
      const double value_loss = residual.squaredNorm() * inv_b;
      Matrix value_grad =
          (2.0 * config.value_loss_coef * inv_b * residual).transpose();
      MlpParams critic_grad =
          mlp_backward(agent.critic, critic_cache, value_grad);
      clip_grad_norm(critic_grad, config.max_grad_norm);
      adam_step(agent.critic, critic_grad, agent.critic_opt);

      if (diag.minibatches == 0) diag.first_minibatch_ratio_deviation = ratio_dev * inv_b;
      diag.policy_loss += policy_loss * inv_b;
      diag.value_loss += value_loss;
      ++diag.minibatches;
    }
  }
  diag.policy_loss /= diag.minibatches;
  diag.value_loss /= diag.minibatches;
  diag.approx_kl /= sample_count;
  diag.clip_fraction = clipped_count / sample_count;
  return diag;
}

PpoRunResult ppo_train(const Environment& env, const BetaSchedule& sched,
                       const PpoConfig& config, int episodes,
                       std::uint64_t master_seed, int run) {
  config.validate();
  sched.validate();
  if (episodes < 1) throw ContractViolation("ppo_train: episodes must be >= 1");
  const EnvSpec& spec = env.spec();
  if (spec.action_dim < 1)
    throw ContractViolation("ppo_train: environment has no actions");

  const auto run_id = static_cast<std::uint64_t>(run);
  RngStream weight_rng = make_stream(master_seed, run_id, StreamPurpose::kWeightInit);
  RngStream init_rng = make_stream(master_seed, run_id, StreamPurpose::kInitState);
  RngStream dyn_rng = make_stream(master_seed, run_id, StreamPurpose::kDynamicsNoise);
  RngStream policy_rng = make_stream(master_seed, run_id, StreamPurpose::kPolicySample);
  RngStream shuffle_rng =
      make_stream(master_seed, run_id, StreamPurpose::kMinibatchShuffle);

  PpoRunResult result;
  result.agent = make_agent(spec.state_dim, spec.action_dim, config, weight_rng);
  PpoAgent& agent = result.agent;
  result.episodes.reserve(episodes);

  RolloutBuffer buffer;
  for (int e = 0; e < episodes; ++e) {
    const double beta = beta_at(sched, e);
    EpisodeStats stats;
    stats.episode = e;
    stats.beta = beta;
    Vector state = env.reset(init_rng);
    for (int t = 0; t < spec.horizon; ++t) {
      PolicySample sample = policy_sample(agent.actor, state, env, policy_rng);
      const double value = mlp_forward(agent.critic, state)[0];
      DualRewardStep step = env.step(state, sample.action, dyn_rng);

      stats.target_return += step.r_target;
      stats.assist_return += step.r_assist;
      stats.violations += step.r_assist < 0.0 ? 1 : 0;
      ++stats.length;

      RolloutRecord rec;
      rec.state = std::move(state);
      rec.raw_action = std::move(sample.raw);
      rec.log_prob = sample.log_prob;
      rec.reward = blend(step.r_target, step.r_assist, beta);
      rec.value = value;
      rec.done = step.terminated;
      rec.episode_end = step.terminated || t + 1 == spec.horizon;
      if (rec.episode_end && !rec.done)
        rec.bootstrap_value = mlp_forward(agent.critic, step.next_state)[0];
      rec.beta = beta;
      buffer.push(std::move(rec));

      if (step.terminated) break;
      state = std::move(step.next_state);
    }
    result.episodes.push_back(stats);
    if (static_cast<int>(buffer.size()) >= config.rollout_min_steps) {
      result.updates.push_back(ppo_update(agent, buffer, config, shuffle_rng));
      buffer.clear();
    }
  }
  return result;
}

}  // namespace taexplore
