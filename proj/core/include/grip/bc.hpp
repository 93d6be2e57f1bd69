#pragma once

#include <cstdint>
#include <vector>

#include "grip/config.hpp"
#include "grip/policy.hpp"
#include "grip/trajectory.hpp"

namespace grip {

struct BcResult {
  Policy policy;
  std::vector<double> epoch_losses;
};

/// Supervised fit of the actor head to the demonstrations: cross-entropy on
/// logits for discrete actions, squared error of the squashed mean for
/// continuous ones. Throws ConfigError on a state-only dataset. Deterministic
/// evaluation of the result uses argmax / tanh(mean) like any other policy.
BcResult bc_train(const DemoDataset& demos, ActionSpec action_spec,
                  const Policy::Options& policy_options, const BcSection& cfg,
                  std::vector<double> obs_scale, std::uint64_t seed);

}  // namespace grip
