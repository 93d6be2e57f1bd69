#pragma once

#include "grip/config.hpp"
#include "grip/train.hpp"

namespace grip {

/// Runs one algorithm under the shared artifact layout: the on-policy
/// variants dispatch to train(), bc runs the supervised fit. Every variant
/// writes config.snapshot.json, metrics.csv (identical header) and
/// policy.ckpt into cfg.out_dir. For bc the proximity_loss_e column carries
/// the cloning loss and the rollout columns are nan.
TrainResult run_variant(const ExperimentConfig& cfg);

}  // namespace grip
