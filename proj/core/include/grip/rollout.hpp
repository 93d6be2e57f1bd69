#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "grip/env.hpp"
#include "grip/policy.hpp"
#include "grip/proximity.hpp"

namespace grip {

/// One episode fragment gathered during collection. states holds T+1
/// observations for T transitions; a fragment that did not finish inside
/// the buffer has ended = false and continues in the next collection call.
struct RolloutEpisode {
  std::vector<std::vector<double>> states;
  std::vector<std::vector<double>> env_actions;
  std::vector<std::vector<double>> raw_actions;  // continuous pre-squash
  std::vector<double> log_probs;
  std::vector<double> values;
  std::vector<double> rewards;
  double bootstrap_value = 0.0;  // critic value of the final state; 0 on success
  bool ended = false;
  bool success = false;
  int episode_length = 0;  // full episode length when ended, across fragments

  int transitions() const { return static_cast<int>(env_actions.size()); }
};

struct RolloutBuffer {
  std::vector<RolloutEpisode> episodes;
  std::size_t transitions = 0;
};

/// One environment plus its in-flight episode, owned by a single collector.
struct RolloutWorker {
  std::unique_ptr<Env> env;
  std::vector<double> pending_obs;  // current observation of the live episode
  bool live = false;
};

std::vector<RolloutWorker> make_workers(const EnvConfig& cfg, int count,
                                        std::uint64_t seed);

/// Steps the workers with sampled actions until `budget` transitions are
/// stored. Rewards are filled from the current ensemble (progress
/// difference); call relabel_rewards after an ensemble update to refresh
/// them. Workers are visited round-robin in index order, so results do not
/// depend on scheduling.
RolloutBuffer collect_rollouts(const Policy& policy, const ProximityEnsemble& ens,
                               std::span<RolloutWorker> workers, int budget,
                               std::uint64_t seed, int iteration);

/// Rewrites every episode's rewards from the given ensemble. States and
/// actions are untouched.
void relabel_rewards(RolloutBuffer& buffer, const ProximityEnsemble& ens);

/// Generalized advantage estimation over a flat transition array.
/// values has one more entry than rewards (the final entry is the
/// bootstrap); a set done flag cuts both the bootstrap and the recursion at
/// that step. returns = advantages + values.
void gae(std::span<const double> rewards, std::span<const double> values,
         std::span<const std::uint8_t> dones, double gamma, double lambda,
         std::span<double> advantages, std::span<double> returns);

/// Per-episode advantages/returns for the whole buffer, flattened in
/// episode order. Success terminals bootstrap with zero, truncated or
/// unfinished episodes with the recorded critic value.
void compute_advantages(const RolloutBuffer& buffer, double gamma, double lambda,
                        std::vector<double>& advantages,
                        std::vector<double>& returns);

}  // namespace grip
