#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "grip/env.hpp"
#include "grip/policy.hpp"

namespace grip {

struct EpisodeRecord {
  int length = 0;
  bool success = false;
  double ooc_ratio = 0.0;  // fraction of actions outside the expert space
};

struct EvalReport {
  double mean_length = 0.0;  // failures count at the episode cap
  double success_rate = 0.0;
  double mean_ooc_ratio = 0.0;  // per-episode ratios averaged across episodes
  std::vector<EpisodeRecord> episodes;
};

using DeterministicPolicy =
    std::function<std::vector<double>(std::span<const double>)>;

/// Deterministic-action evaluation protocol: `episodes` rollouts on a fresh
/// environment seeded from `seed`, every episode run to termination.
/// Unsuccessful episodes terminate at the cap, so they score max_steps.
EvalReport evaluate(const DeterministicPolicy& policy, const EnvConfig& env_cfg,
                    const ExpertConstraint& expert_constraint, int episodes,
                    std::uint64_t seed);

EvalReport evaluate(const Policy& policy, const EnvConfig& env_cfg,
                    const ExpertConstraint& expert_constraint, int episodes,
                    std::uint64_t seed);

/// eval.csv: one row per episode (episode,length,success,ooc_ratio).
void write_eval_csv(const std::filesystem::path& path, const EvalReport& report);
EvalReport read_eval_csv(const std::filesystem::path& path);

}  // namespace grip
