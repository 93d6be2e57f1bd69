#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "grip/config.hpp"
#include "grip/evaluate.hpp"
#include "grip/train.hpp"

namespace grip {

/// Loads a trained run directory (config.snapshot.json + policy.ckpt),
/// evaluates it and writes eval.csv into the run directory.
EvalReport evaluate_run(const std::filesystem::path& run_dir, int episodes,
                        std::uint64_t seed);

struct OocRow {
  std::string variant;
  double success_rate = 0.0;
  double ooc_ratio = 0.0;
};

/// One row per evaluated run directory (a run is evaluated when it contains
/// eval.csv). Throws GenerationError when a requested run is missing.
std::vector<OocRow> ooc_analysis(const std::vector<std::filesystem::path>& run_dirs);
void write_ooc_csv(const std::filesystem::path& path, const std::vector<OocRow>& rows);

struct SweepCell {
  double bound = 0.0;
  std::string variant;
  double mean_episode_length = 0.0;
  double success_rate = 0.0;
  bool ok = false;
  std::string error;
};

/// Constraint-severity sweep: per bound the demonstrations are regenerated,
/// then every variant trains and evaluates on them. A failed cell is
/// recorded and the sweep continues. Results land in out_dir/severity.csv.
std::vector<SweepCell> severity_sweep(const ExperimentConfig& base,
                                      const std::vector<double>& bounds,
                                      const std::vector<std::string>& variants,
                                      const std::filesystem::path& out_dir);

struct AblationOutcome {
  TrainResult masked;
  TrainResult unmasked;
  EvalReport masked_eval;
  EvalReport unmasked_eval;
};

/// Paired comparison of the annealed mask schedule against always trusting
/// the interpolated targets (mask probability pinned to zero), equal seeds.
/// Writes masked/ and unmasked/ run directories under out_dir.
AblationOutcome masking_ablation(const ExperimentConfig& base,
                                 const std::filesystem::path& out_dir);

}  // namespace grip
