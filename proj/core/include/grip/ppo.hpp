#pragma once

#include <cstdint>
#include <vector>

#include "grip/policy.hpp"
#include "grip/rollout.hpp"

namespace grip {

struct PpoConfig {
  int iterations = 300;
  int rollout_size = 2048;
  int num_envs = 1;
  double learning_rate = 1e-3;
  double entropy_coef = 1e-2;
  int epochs = 4;
  int minibatches = 4;
  double clip = 0.2;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double value_coef = 0.5;
  double grad_clip = 0.5;
  std::vector<int> hidden = {64, 64};
  std::string activation = "tanh";
  double log_std_init = -0.5;

  void validate() const;
};

struct PpoUpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double grad_norm = 0.0;
};

/// Normalizes to zero mean and unit (population) variance in place; a
/// near-constant batch is only centered.
void normalize_advantages(std::vector<double>& advantages);

/// Clipped-surrogate update over the buffer: per epoch the transitions are
/// reshuffled and split into cfg.minibatches chunks; each chunk takes one
/// adaptive-moment step on -surrogate + value_coef * value MSE
/// - entropy_coef * entropy, with the global gradient norm clipped.
/// Advantages are normalized once per call. Throws TrainingError on a
/// non-finite loss, naming the iteration.
PpoUpdateStats ppo_update(Policy& policy, const RolloutBuffer& buffer,
                          const std::vector<double>& advantages,
                          const std::vector<double>& returns,
                          const PpoConfig& cfg, std::uint64_t seed, int iteration);

}  // namespace grip
