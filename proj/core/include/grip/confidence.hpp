#pragma once

#include <span>
#include <vector>

#include "grip/proximity.hpp"

namespace grip {

enum class ConfidenceMode { kEnsemble, kMcDropout };

struct ConfidenceConfig {
  /// With confidence estimation off every rollout state is treated as
  /// unconfident: no anchors, no interpolation, zero targets everywhere.
  bool enabled = true;
  ConfidenceMode mode = ConfidenceMode::kEnsemble;
  /// Stochastic passes for the mc_dropout mode.
  int mcd_passes = 5;
  /// Nearest-rank percentile of expert-state variances used as the
  /// confidence threshold.
  double threshold_percentile = 95.0;
  /// Iterations over which the interpolation mask probability decays
  /// linearly from 1 to 0. Values <= 0 mean fully decayed from the start.
  int anneal_horizon = 0;
  /// When >= 0, pins the mask probability instead of the schedule.
  double mask_override = -1.0;

  void validate(int ensemble_members) const;
};

/// Prediction variance for one state: population variance across the
/// members' dropout-off outputs (ensemble mode) or across mcd_passes
/// stochastic passes of member 0 (mc_dropout mode). Confidence is the
/// negated variance, so a lower value means higher confidence.
double estimate_variance(const ProximityEnsemble& ens, StateView s,
                         const ConfidenceConfig& cfg, Rng* mcd_rng);

/// Nearest-rank percentile: the ceil(q/100 * n)-th smallest value.
double nearest_rank_percentile(std::vector<double> values, double q);

/// q-th percentile of expert-state variances under the current ensemble.
/// Throws ConfigError on an empty expert set.
double expert_threshold(const ProximityEnsemble& ens,
                        std::span<const StateView> expert_states,
                        const ConfidenceConfig& cfg, Rng* mcd_rng);

/// Linear interpolation in log-proximity space between two anchors:
/// decay^(rho_start + (t_local / t_sub) * (rho_end - rho_start)).
double interpolate_target(double rho_start, double rho_end, int t_local,
                          int t_sub, double decay);

/// Mask probability at an iteration: max(0, 1 - iteration / horizon).
double mask_probability(int iteration, int horizon);

enum class StateRole { kAnchor, kIntermediate, kUnconfident };

struct StateAnnotation {
  StateRole role = StateRole::kUnconfident;
  double variance = 0.0;
  double mean = 0.0;    // dropout-off ensemble mean prediction
  double rho = 0.0;     // log-scale distance, anchors only
  double target = 0.0;  // anchors: decay^rho; intermediates: interpolated
};

/// Classifies every state of one rollout trajectory. States whose variance
/// is at most the threshold become anchors carrying
/// rho = log_decay(clamp(mean, decay^rho_max, 1)); states strictly between
/// two consecutive anchors become intermediates with interpolated targets;
/// everything else is unconfident. rho_max is 2 * max_steps of the source
/// environment.
std::vector<StateAnnotation> annotate_rollout(
    std::span<const std::vector<double>> states, const ProximityEnsemble& ens,
    double threshold, const ConfidenceConfig& cfg, double rho_max,
    Rng* mcd_rng);

}  // namespace grip
