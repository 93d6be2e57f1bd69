#include "grip/confidence.hpp"

#include <algorithm>
#include <cmath>

#include "grip/error.hpp"

namespace grip {

void ConfidenceConfig::validate(int ensemble_members) const {
  if (threshold_percentile <= 0.0 || threshold_percentile > 100.0) {
    throw ConfigError("ConfidenceConfig: percentile must lie in (0, 100]");
  }
  if (!enabled) return;
  if (mode == ConfidenceMode::kMcDropout && mcd_passes < 2) {
    throw ConfigError("ConfidenceConfig: mc_dropout needs at least 2 passes");
  }
  if (mode == ConfidenceMode::kEnsemble && ensemble_members < 2) {
    throw ConfigError("ConfidenceConfig: ensemble mode needs at least 2 members");
  }
}

namespace {

double population_variance(std::span<const double> values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return var / static_cast<double>(values.size());
}

}  // namespace

double estimate_variance(const ProximityEnsemble& ens, StateView s,
                         const ConfidenceConfig& cfg, Rng* mcd_rng) {
  static thread_local std::vector<double> outs;
  if (cfg.mode == ConfidenceMode::kEnsemble) {
    require(ens.members() >= 2, "estimate_variance: ensemble mode needs >= 2 members");
    outs.resize(static_cast<std::size_t>(ens.members()));
    ens.member_outputs(s, outs);
    return population_variance(outs);
  }
  require(mcd_rng != nullptr, "estimate_variance: mc_dropout mode needs a generator");
  outs.resize(static_cast<std::size_t>(cfg.mcd_passes));
  for (int k = 0; k < cfg.mcd_passes; ++k) {
    outs[static_cast<std::size_t>(k)] =
        ens.member_forward(0, s, /*stochastic=*/true, mcd_rng);
  }
  return population_variance(outs);
}

double nearest_rank_percentile(std::vector<double> values, double q) {
  require(!values.empty(), "nearest_rank_percentile: empty input");
  require(q > 0.0 && q <= 100.0, "nearest_rank_percentile: q outside (0, 100]");
  std::sort(values.begin(), values.end());
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(q / 100.0 * static_cast<double>(values.size())));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

double expert_threshold(const ProximityEnsemble& ens,
                        std::span<const StateView> expert_states,
                        const ConfidenceConfig& cfg, Rng* mcd_rng) {
  if (expert_states.empty()) {
    throw ConfigError("expert_threshold: no expert states");
  }
  std::vector<double> variances;
  variances.reserve(expert_states.size());
  for (StateView s : expert_states) {
    variances.push_back(estimate_variance(ens, s, cfg, mcd_rng));
  }
  return nearest_rank_percentile(std::move(variances), cfg.threshold_percentile);
}

double interpolate_target(double rho_start, double rho_end, int t_local,
                          int t_sub, double decay) {
  require(decay > 0.0 && decay < 1.0, "interpolate_target: decay outside (0, 1)");
  require(t_sub > 0 && t_local > 0 && t_local < t_sub,
          "interpolate_target: need 0 < t_local < t_sub");
  require(std::isfinite(rho_start) && std::isfinite(rho_end),
          "interpolate_target: non-finite log distance");
  double rho = rho_start + (static_cast<double>(t_local) / t_sub) * (rho_end - rho_start);
  return std::pow(decay, rho);
}

double mask_probability(int iteration, int horizon) {
  require(iteration >= 0, "mask_probability: negative iteration");
  if (horizon <= 0 || iteration >= horizon) return 0.0;
  return 1.0 - static_cast<double>(iteration) / static_cast<double>(horizon);
}

std::vector<StateAnnotation> annotate_rollout(
    std::span<const std::vector<double>> states, const ProximityEnsemble& ens,
    double threshold, const ConfidenceConfig& cfg, double rho_max, Rng* mcd_rng) {
  require(!states.empty(), "annotate_rollout: empty trajectory");
  double decay = ens.decay();
  double log_decay = std::log(decay);
  double floor = std::pow(decay, rho_max);

  std::vector<StateAnnotation> notes(states.size());
  std::vector<std::size_t> anchors;
  for (std::size_t i = 0; i < states.size(); ++i) {
    StateAnnotation& note = notes[i];
    note.mean = ens.mean_predict(states[i]);
    if (!cfg.enabled) {
      note.role = StateRole::kUnconfident;
      continue;
    }
    note.variance = estimate_variance(ens, states[i], cfg, mcd_rng);
    if (note.variance <= threshold) {
      note.role = StateRole::kAnchor;
      note.rho = std::log(std::clamp(note.mean, floor, 1.0)) / log_decay;
      note.target = std::pow(decay, note.rho);
      anchors.push_back(i);
    }
  }
  for (std::size_t a = 1; a < anchors.size(); ++a) {
    std::size_t lo = anchors[a - 1];
    std::size_t hi = anchors[a];
    if (hi <= lo + 1) continue;
    int t_sub = static_cast<int>(hi - lo);
    for (std::size_t t = lo + 1; t < hi; ++t) {
      StateAnnotation& note = notes[t];
      note.role = StateRole::kIntermediate;
      note.target = interpolate_target(notes[lo].rho, notes[hi].rho,
                                       static_cast<int>(t - lo), t_sub, decay);
    }
  }
  return notes;
}

}  // namespace grip
