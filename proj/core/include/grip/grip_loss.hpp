#pragma once

#include <span>
#include <vector>

#include "grip/confidence.hpp"
#include "grip/proximity.hpp"

namespace grip {

/// One confident-state supervision term. Anchors carry their clamped value
/// as target and are never masked; intermediates carry the interpolated
/// target and are masked to a zero target with the schedule probability.
struct ConfidentTerm {
  StateView state;
  double target = 0.0;
  bool maskable = false;
};

struct GripLossStats {
  double loss_expert = 0.0;
  double loss_confident = 0.0;
  double loss_unconfident = 0.0;
  int mask_draws = 0;  // number of intermediate terms seen
  int masked = 0;      // of those, how many drew the zero target
  double total() const { return loss_expert + loss_confident + loss_unconfident; }
};

/// Combined proximity objective: decayed expert targets, confident-state
/// terms with per-intermediate stochastic masking at probability p_mask,
/// and zero targets on everything unconfident. The three terms are each a
/// mean over their own batch and the members, summed unweighted. Masks are
/// drawn from mask_rng independently per intermediate term. Empty batches
/// contribute zero, so with no rollout states the gradients equal the
/// expert-loss gradients exactly.
GripLossStats grip_loss(const ProximityEnsemble& ens,
                        std::span<const StateView> expert_states,
                        std::span<const double> expert_targets,
                        std::span<const ConfidentTerm> confident_terms,
                        std::span<const StateView> unconfident_states,
                        double p_mask, Rng& mask_rng,
                        std::vector<Rng>* dropout_rngs,
                        std::vector<std::vector<double>>* member_grads);

}  // namespace grip
