#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "grip/config.hpp"

namespace grip {

/// Feature switches implied by the algorithm variant.
struct VariantFlags {
  bool confidence = false;      // anchors + interpolation + masking
  bool train_dropout = false;   // dropout active in proximity loss passes
};

VariantFlags variant_flags(const std::string& variant);

/// metrics.csv column order; fixed across versions.
const std::vector<std::string>& metrics_header();

struct TrainResult {
  std::filesystem::path run_dir;
  int iterations = 0;
  double final_mean_episode_length = 0.0;
  double final_success_rate = 0.0;
};

/// Full on-policy training run: pretrains the ensemble on the configured
/// demonstrations, then alternates rollout collection, confidence
/// annotation, the combined proximity update, reward relabeling and the
/// policy update. Writes config.snapshot.json, metrics.csv, policy.ckpt and
/// ensemble/ into cfg.out_dir. Stage failures rethrow with the iteration
/// and stage name attached.
TrainResult train(const ExperimentConfig& cfg);

}  // namespace grip
