#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "grip/confidence.hpp"
#include "grip/env.hpp"
#include "grip/experts.hpp"
#include "grip/ppo.hpp"

namespace grip {

struct ExpertSection {
  ExpertConstraint constraint = ExpertConstraint::cardinal();
  int count = 1;
  MazeExpertParams controller;
};

struct ProximitySection {
  int members = 5;
  double decay = 0.95;
  std::vector<int> hidden = {64, 64, 64};
  double dropout_rate = 0.1;
  std::string activation = "tanh";
  double learning_rate = 1e-3;
  int pretrain_epochs = 5;
  int batch_size = 32;
  double epochs_per_iter = 1.0;
  /// Tri-state override of the variant's dropout behavior in training
  /// passes: -1 = per variant, 0 = off, 1 = on.
  int train_dropout = -1;
};

struct ConfidenceSection {
  /// Tri-state override of the variant's confidence estimation:
  /// -1 = per variant, 0 = off (no anchors or interpolation), 1 = on.
  int enabled = -1;
  std::string mode = "ensemble";  // or "mc_dropout"
  int mcd_passes = 5;
  double threshold_percentile = 95.0;
  /// -1 = anneal over the full iteration budget, 0 = fully decayed from the
  /// start, > 0 = explicit horizon in iterations.
  int anneal_horizon = -1;
  double mask_override = -1.0;
};

struct BcSection {
  int epochs = 500;
  int batch_size = 64;
  double learning_rate = 1e-3;
};

/// Complete, serializable description of one run. load() starts from the
/// per-environment defaults and applies the file's keys on top; unknown
/// keys are rejected, so snapshots written by one version either reproduce
/// the run or fail loudly.
struct ExperimentConfig {
  std::string variant = "grip";  // grip | proximity | proximity_drop | bc
  std::uint64_t seed = 0;
  std::string out_dir = "runs/out";
  std::string demos_path = "demos.jsonl";
  EnvConfig env;  // env.action_scale holds the maze agent bound
  bool agent_cardinal_only = false;  // grid: restrict the learner to 4 moves
  ExpertSection expert;
  ProximitySection proximity;
  ConfidenceSection confidence;
  PpoConfig ppo;
  BcSection bc;
  int eval_episodes = 160;
  int checkpoint_interval = 0;  // iterations between checkpoints; 0 = final only

  static ExperimentConfig defaults_for(const std::string& env_id);
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);
  std::string to_json_text() const;
  void save(const std::filesystem::path& path) const;

  void validate() const;
  ConfidenceConfig confidence_config(bool enabled) const;
  ProximityEnsemble::Options proximity_options() const;
  Policy::Options policy_options() const;
  ActionSpec action_spec() const;
  DatasetRequest dataset_request() const;
};

}  // namespace grip
