#include "grip/bc.hpp"

#include <cmath>
#include <numeric>

#include "grip/error.hpp"

namespace grip {

BcResult bc_train(const DemoDataset& demos, ActionSpec action_spec,
                  const Policy::Options& policy_options, const BcSection& cfg,
                  std::vector<double> obs_scale, std::uint64_t seed) {
  std::vector<const std::vector<double>*> states;
  std::vector<const std::vector<double>*> actions;
  for (const Trajectory& traj : demos.trajectories) {
    if (!traj.has_actions()) {
      throw ConfigError("bc_train: dataset is state-only; cloning needs actions");
    }
    for (std::size_t t = 0; t < traj.actions.size(); ++t) {
      states.push_back(&traj.states[t]);
      actions.push_back(&traj.actions[t]);
    }
  }
  if (states.empty()) throw ConfigError("bc_train: no transitions in dataset");

  int obs_dim = static_cast<int>(states.front()->size());
  BcResult result{Policy(obs_dim, action_spec, policy_options, std::move(obs_scale),
                         derive_seed(seed, "policy")),
                  {}};
  Policy& policy = result.policy;

  Rng shuffle_rng = derive_rng(seed, "bc-shuffle");
  std::vector<std::size_t> order(states.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  int batch = std::max(1, cfg.batch_size);

  Policy::Grads grads = policy.make_grads();
  nn::ForwardTrace trace;
  std::vector<double> upstream;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order, shuffle_rng);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < order.size();
         begin += static_cast<std::size_t>(batch)) {
      std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(batch));
      double denom = static_cast<double>(end - begin);
      std::fill(grads.actor.begin(), grads.actor.end(), 0.0);
      double loss = 0.0;
      for (std::size_t idx = begin; idx < end; ++idx) {
        const std::vector<double>& obs = *states[order[idx]];
        const std::vector<double>& action = *actions[order[idx]];
        std::vector<double> out = policy.actor_forward(obs, &trace);
        upstream.assign(out.size(), 0.0);
        if (action_spec.discrete) {
          int label = static_cast<int>(action[0]);
          require(label >= 0 && label < action_spec.dim,
                  "bc_train: demo action outside the policy's action set");
          double mx = *std::max_element(out.begin(), out.end());
          double sum = 0.0;
          for (double v : out) sum += std::exp(v - mx);
          double lse = mx + std::log(sum);
          loss += (lse - out[static_cast<std::size_t>(label)]) / denom;
          for (int i = 0; i < action_spec.dim; ++i) {
            double p = std::exp(out[static_cast<std::size_t>(i)] - lse);
            upstream[static_cast<std::size_t>(i)] =
                (p - (i == label ? 1.0 : 0.0)) / denom;
          }
        } else {
          require(action.size() == out.size(),
                  "bc_train: demo action dimension mismatch");
          for (std::size_t i = 0; i < out.size(); ++i) {
            double pred = std::tanh(out[i]);
            double err = pred - action[i];
            loss += err * err / denom;
            upstream[i] = 2.0 * err * (1.0 - pred * pred) / denom;
          }
        }
        policy.actor_backward(trace, upstream, grads.actor);
      }
      if (!std::isfinite(loss)) throw TrainingError("bc_train: non-finite loss");
      policy.apply_grads(grads, cfg.learning_rate);
      epoch_loss += loss;
      batches += 1;
    }
    result.epoch_losses.push_back(batches ? epoch_loss / batches : 0.0);
  }
  return result;
}

}  // namespace grip
