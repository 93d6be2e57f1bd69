#include "grip/ppo.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "grip/error.hpp"

namespace grip {

void PpoConfig::validate() const {
  if (iterations < 0) throw ConfigError("ppo: iterations must be >= 0");
  if (rollout_size < 1) throw ConfigError("ppo: rollout_size must be positive");
  if (num_envs < 1) throw ConfigError("ppo: num_envs must be positive");
  if (clip <= 0.0 || clip >= 1.0) throw ConfigError("ppo: clip must lie in (0, 1)");
  if (gamma < 0.0 || gamma > 1.0) throw ConfigError("ppo: gamma must lie in [0, 1]");
  if (gae_lambda < 0.0 || gae_lambda > 1.0) {
    throw ConfigError("ppo: gae_lambda must lie in [0, 1]");
  }
  if (epochs < 1 || minibatches < 1) {
    throw ConfigError("ppo: epochs and minibatches must be positive");
  }
  if (activation != "tanh" && activation != "relu") {
    throw ConfigError("ppo: activation must be tanh or relu");
  }
}

void normalize_advantages(std::vector<double>& advantages) {
  if (advantages.empty()) return;
  double n = static_cast<double>(advantages.size());
  double mean = 0.0;
  for (double a : advantages) mean += a;
  mean /= n;
  double var = 0.0;
  for (double a : advantages) var += (a - mean) * (a - mean);
  double std = std::sqrt(var / n);
  for (double& a : advantages) {
    a = std > 1e-12 ? (a - mean) / std : a - mean;
  }
}

namespace {

// Flat view of one transition inside the buffer.
struct TransitionRef {
  const RolloutEpisode* episode;
  int t;
};

}  // namespace

PpoUpdateStats ppo_update(Policy& policy, const RolloutBuffer& buffer,
                          const std::vector<double>& advantages,
                          const std::vector<double>& returns,
                          const PpoConfig& cfg, std::uint64_t seed, int iteration) {
  require(advantages.size() == buffer.transitions &&
              returns.size() == buffer.transitions,
          "ppo_update: advantages/returns must cover the buffer");
  PpoUpdateStats stats;
  if (buffer.transitions == 0) return stats;

  std::vector<TransitionRef> refs;
  refs.reserve(buffer.transitions);
  for (const RolloutEpisode& episode : buffer.episodes) {
    for (int t = 0; t < episode.transitions(); ++t) {
      refs.push_back({&episode, t});
    }
  }

  std::vector<double> norm_adv = advantages;
  normalize_advantages(norm_adv);

  Rng shuffle_rng = derive_rng(seed, "ppo-shuffle", static_cast<std::uint64_t>(iteration));
  std::vector<std::size_t> order(refs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  Policy::Grads grads = policy.make_grads();
  nn::ForwardTrace actor_trace;
  nn::ForwardTrace critic_trace;
  std::vector<double> upstream;
  int minibatch_count = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order, shuffle_rng);
    std::size_t chunk = (order.size() + cfg.minibatches - 1) /
                        static_cast<std::size_t>(cfg.minibatches);
    for (std::size_t begin = 0; begin < order.size(); begin += chunk) {
      std::size_t end = std::min(order.size(), begin + chunk);
      double batch = static_cast<double>(end - begin);
      std::fill(grads.actor.begin(), grads.actor.end(), 0.0);
      std::fill(grads.critic.begin(), grads.critic.end(), 0.0);
      std::fill(grads.log_std.begin(), grads.log_std.end(), 0.0);
      double policy_loss = 0.0, value_loss = 0.0, entropy_sum = 0.0;
      int clipped = 0;

      for (std::size_t idx = begin; idx < end; ++idx) {
        const TransitionRef& ref = refs[order[idx]];
        std::size_t flat = order[idx];
        const std::vector<double>& obs =
            ref.episode->states[static_cast<std::size_t>(ref.t)];
        const std::vector<double>& action =
            policy.action_spec().discrete
                ? ref.episode->env_actions[static_cast<std::size_t>(ref.t)]
                : ref.episode->raw_actions[static_cast<std::size_t>(ref.t)];

        std::vector<double> actor_out = policy.actor_forward(obs, &actor_trace);
        DistEval eval = policy.evaluate_action(actor_out, action);
        double logp_old = ref.episode->log_probs[static_cast<std::size_t>(ref.t)];
        double adv = norm_adv[flat];
        double ratio = std::exp(eval.log_prob - logp_old);
        double surr1 = ratio * adv;
        double clip_ratio = std::clamp(ratio, 1.0 - cfg.clip, 1.0 + cfg.clip);
        double surr2 = clip_ratio * adv;
        double surrogate = std::min(surr1, surr2);
        if (std::abs(ratio - 1.0) > cfg.clip) clipped += 1;

        policy_loss += -surrogate / batch;
        entropy_sum += eval.entropy / batch;
        // Gradient of -(surrogate + entropy bonus); the clipped branch is
        // constant in the parameters.
        double surr_coef = surr1 <= surr2 ? -adv * ratio / batch : 0.0;
        upstream.assign(actor_out.size(), 0.0);
        for (std::size_t i = 0; i < actor_out.size(); ++i) {
          upstream[i] = surr_coef * eval.dlogp_dout[i] -
                        cfg.entropy_coef / batch * eval.dentropy_dout[i];
        }
        policy.actor_backward(actor_trace, upstream, grads.actor);
        for (std::size_t i = 0; i < grads.log_std.size(); ++i) {
          grads.log_std[i] += surr_coef * eval.dlogp_dlogstd[i] -
                              cfg.entropy_coef / batch * eval.dentropy_dlogstd[i];
        }

        double v = policy.critic_forward(obs, &critic_trace);
        double verr = v - returns[flat];
        value_loss += cfg.value_coef * verr * verr / batch;
        policy.critic_backward(critic_trace, 2.0 * cfg.value_coef * verr / batch,
                               grads.critic);
      }

      if (!std::isfinite(policy_loss) || !std::isfinite(value_loss)) {
        throw TrainingError("ppo_update: non-finite loss at iteration " +
                            std::to_string(iteration));
      }
      std::span<double> groups[] = {grads.actor, grads.critic, grads.log_std};
      stats.grad_norm += nn::clip_global_norm(groups, cfg.grad_clip);
      policy.apply_grads(grads, cfg.learning_rate);

      stats.policy_loss += policy_loss;
      stats.value_loss += value_loss;
      stats.entropy += entropy_sum;
      stats.clip_fraction += static_cast<double>(clipped) / batch;
      minibatch_count += 1;
    }
  }
  if (minibatch_count > 0) {
    stats.policy_loss /= minibatch_count;
    stats.value_loss /= minibatch_count;
    stats.entropy /= minibatch_count;
    stats.clip_fraction /= minibatch_count;
    stats.grad_norm /= minibatch_count;
  }
  return stats;
}

}  // namespace grip
