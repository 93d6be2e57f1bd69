#include "grip/rollout.hpp"

#include "grip/error.hpp"

namespace grip {

std::vector<RolloutWorker> make_workers(const EnvConfig& cfg, int count,
                                        std::uint64_t seed) {
  if (count < 1) throw ConfigError("make_workers: need at least one worker");
  std::vector<RolloutWorker> workers;
  workers.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    workers.push_back(
        {make_env(cfg, derive_seed(seed, "env", static_cast<std::uint64_t>(i))),
         {}, false});
  }
  return workers;
}

RolloutBuffer collect_rollouts(const Policy& policy, const ProximityEnsemble& ens,
                               std::span<RolloutWorker> workers, int budget,
                               std::uint64_t seed, int iteration) {
  require(!workers.empty(), "collect_rollouts: no workers");
  require(budget >= 0, "collect_rollouts: negative budget");
  RolloutBuffer buffer;
  if (budget == 0) return buffer;

  int base = budget / static_cast<int>(workers.size());
  int extra = budget % static_cast<int>(workers.size());
  for (std::size_t w = 0; w < workers.size(); ++w) {
    RolloutWorker& worker = workers[w];
    int quota = base + (static_cast<int>(w) < extra ? 1 : 0);
    if (quota == 0) continue;
    Rng rng = derive_rng(seed, "rollout", static_cast<std::uint64_t>(iteration), w);

    if (!worker.live) {
      worker.pending_obs = worker.env->reset();
      worker.live = true;
    }
    RolloutEpisode episode;
    episode.states.push_back(worker.pending_obs);
    for (int step = 0; step < quota; ++step) {
      const std::vector<double>& obs = episode.states.back();
      PolicySample sample = policy.sample(obs, rng);
      double value = policy.value(obs);
      EnvStep out = worker.env->step(sample.env_action);

      episode.env_actions.push_back(std::move(sample.env_action));
      if (!sample.raw_action.empty()) {
        episode.raw_actions.push_back(std::move(sample.raw_action));
      }
      episode.log_probs.push_back(sample.log_prob);
      episode.values.push_back(value);
      episode.states.push_back(std::move(out.observation));

      if (out.done) {
        episode.ended = true;
        episode.success = out.success;
        episode.episode_length = worker.env->steps();
        episode.bootstrap_value =
            out.success ? 0.0 : policy.value(episode.states.back());
        buffer.transitions += static_cast<std::size_t>(episode.transitions());
        buffer.episodes.push_back(std::move(episode));
        episode = RolloutEpisode{};
        worker.pending_obs = worker.env->reset();
        episode.states.push_back(worker.pending_obs);
      }
    }
    if (episode.transitions() > 0) {
      // Unfinished fragment: ship it for training, continue the episode in
      // the next collection from its last observation.
      episode.ended = false;
      episode.success = false;
      episode.bootstrap_value = policy.value(episode.states.back());
      worker.pending_obs = episode.states.back();
      buffer.transitions += static_cast<std::size_t>(episode.transitions());
      buffer.episodes.push_back(std::move(episode));
    } else {
      worker.pending_obs = episode.states.front();
    }
  }
  relabel_rewards(buffer, ens);
  return buffer;
}

void relabel_rewards(RolloutBuffer& buffer, const ProximityEnsemble& ens) {
  std::vector<double> means;
  for (RolloutEpisode& episode : buffer.episodes) {
    means.resize(episode.states.size());
    for (std::size_t i = 0; i < episode.states.size(); ++i) {
      means[i] = ens.mean_predict(episode.states[i]);
    }
    episode.rewards.resize(static_cast<std::size_t>(episode.transitions()));
    for (std::size_t t = 0; t + 1 < episode.states.size(); ++t) {
      episode.rewards[t] = means[t + 1] - means[t];
    }
  }
}

void gae(std::span<const double> rewards, std::span<const double> values,
         std::span<const std::uint8_t> dones, double gamma, double lambda,
         std::span<double> advantages, std::span<double> returns) {
  std::size_t n = rewards.size();
  require(values.size() == n + 1, "gae: values must have one more entry than rewards");
  require(dones.size() == n && advantages.size() == n && returns.size() == n,
          "gae: length mismatch");
  double next_adv = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    double not_done = dones[i] ? 0.0 : 1.0;
    double delta = rewards[i] + gamma * values[i + 1] * not_done - values[i];
    next_adv = delta + gamma * lambda * not_done * next_adv;
    advantages[i] = next_adv;
    returns[i] = next_adv + values[i];
  }
}

void compute_advantages(const RolloutBuffer& buffer, double gamma, double lambda,
                        std::vector<double>& advantages,
                        std::vector<double>& returns) {
  advantages.resize(buffer.transitions);
  returns.resize(buffer.transitions);
  std::size_t offset = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> dones;
  for (const RolloutEpisode& episode : buffer.episodes) {
    std::size_t n = static_cast<std::size_t>(episode.transitions());
    values.assign(episode.values.begin(), episode.values.end());
    values.push_back(episode.success ? 0.0 : episode.bootstrap_value);
    dones.assign(n, 0);
    gae(episode.rewards, values, dones, gamma, lambda,
        std::span<double>(advantages).subspan(offset, n),
        std::span<double>(returns).subspan(offset, n));
    offset += n;
  }
}

}  // namespace grip
