#include "grip/grip_loss.hpp"

#include <cmath>

#include "grip/error.hpp"

namespace grip {

GripLossStats grip_loss(const ProximityEnsemble& ens,
                        std::span<const StateView> expert_states,
                        std::span<const double> expert_targets,
                        std::span<const ConfidentTerm> confident_terms,
                        std::span<const StateView> unconfident_states,
                        double p_mask, Rng& mask_rng,
                        std::vector<Rng>* dropout_rngs,
                        std::vector<std::vector<double>>* member_grads) {
  require(p_mask >= 0.0 && p_mask <= 1.0, "grip_loss: mask probability outside [0, 1]");
  GripLossStats stats;

  if (!expert_states.empty()) {
    stats.loss_expert =
        expert_loss(ens, expert_states, expert_targets, dropout_rngs, member_grads);
  }

  if (!confident_terms.empty()) {
    // Draw the masks once per term so every member supervises the same
    // realization, then fold them into effective targets.
    std::vector<double> targets(confident_terms.size());
    for (std::size_t i = 0; i < confident_terms.size(); ++i) {
      const ConfidentTerm& term = confident_terms[i];
      double target = term.target;
      if (term.maskable) {
        stats.mask_draws += 1;
        if (bernoulli(mask_rng, p_mask)) {
          stats.masked += 1;
          target = 0.0;
        }
      }
      targets[i] = target;
    }
    std::vector<StateView> states(confident_terms.size());
    for (std::size_t i = 0; i < confident_terms.size(); ++i) {
      states[i] = confident_terms[i].state;
    }
    stats.loss_confident =
        expert_loss(ens, states, targets, dropout_rngs, member_grads);
  }

  if (!unconfident_states.empty()) {
    stats.loss_unconfident =
        zero_loss(ens, unconfident_states, dropout_rngs, member_grads);
  }

  if (!std::isfinite(stats.total())) {
    throw TrainingError("grip_loss: non-finite loss");
  }
  return stats;
}

}  // namespace grip
