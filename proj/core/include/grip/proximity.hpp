#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "grip/adam.hpp"
#include "grip/mlp.hpp"
#include "grip/trajectory.hpp"

namespace grip {

using StateView = std::span<const double>;

/// Scalar progress model: an ensemble of identically shaped networks with
/// sigmoid outputs, so every prediction lies in (0, 1). Members share the
/// architecture and training data but have independent initialization and
/// dropout streams. The dropout-off ensemble mean is the single prediction
/// used for rewards and anchor values.
class ProximityEnsemble {
 public:
  struct Options {
    int members = 5;
    double decay = 0.95;  // target base: state t of a length-T success gets decay^(T-t)
    std::vector<int> hidden = {64, 64, 64};
    double dropout_rate = 0.1;
    nn::Activation activation = nn::Activation::kTanh;
  };

  ProximityEnsemble(int obs_dim, const Options& options,
                    std::vector<double> obs_scale, std::uint64_t seed);

  int members() const { return static_cast<int>(params_.size()); }
  double decay() const { return decay_; }
  const nn::MlpSpec& member_spec() const { return spec_; }
  const std::vector<double>& obs_scale() const { return obs_scale_; }
  std::uint64_t seed() const { return seed_; }

  /// Dropout-off mean over members.
  double mean_predict(StateView s) const;
  /// Dropout-off per-member outputs; out must hold members() doubles.
  void member_outputs(StateView s, std::span<double> out) const;
  /// Single member pass; stochastic enables its dropout with rng.
  double member_forward(int k, StateView s, bool stochastic, Rng* rng,
                        nn::ForwardTrace* trace = nullptr) const;
  /// Accumulates d(upstream * member_k(s)) / d(params_k) for the pass
  /// recorded in trace.
  void accumulate_member_grad(int k, const nn::ForwardTrace& trace,
                              double upstream, std::span<double> grad) const;

  /// One adaptive-moment step per member.
  void apply_grads(const std::vector<std::vector<double>>& member_grads,
                   double learning_rate);

  std::size_t member_param_count() const { return spec_.param_count(); }
  const std::vector<double>& member_params(int k) const { return params_[k]; }
  std::vector<double>& mutable_member_params(int k) { return params_[k]; }

  /// Directory with manifest.json plus one network checkpoint per member.
  void save(const std::filesystem::path& dir) const;
  static ProximityEnsemble load(const std::filesystem::path& dir);

 private:
  ProximityEnsemble() = default;

  nn::MlpSpec spec_;
  double decay_ = 0.95;
  std::vector<double> obs_scale_;
  std::vector<std::vector<double>> params_;
  std::vector<nn::AdamState> opt_;
  std::uint64_t seed_ = 0;
};

/// Per-state gradient buffers, one per member, laid out like the params.
std::vector<std::vector<double>> make_ensemble_grads(const ProximityEnsemble& ens);

/// Decayed progress targets for a successful trajectory: state t receives
/// decay^(T-t), so the final state gets exactly 1. Throws ConfigError for
/// decay outside (0, 1) and ContractViolation for a failed trajectory.
std::vector<double> expert_targets(const Trajectory& traj, double decay);

/// Mean squared error to targets, averaged over members and batch. When
/// dropout_rngs is non-null each member evaluates with dropout from its own
/// stream. Gradients (optional) accumulate into member_grads.
double expert_loss(const ProximityEnsemble& ens, std::span<const StateView> states,
                   std::span<const double> targets,
                   std::vector<Rng>* dropout_rngs,
                   std::vector<std::vector<double>>* member_grads);

/// Mean squared prediction (zero target), averaged over members and batch.
double zero_loss(const ProximityEnsemble& ens, std::span<const StateView> states,
                 std::vector<Rng>* dropout_rngs,
                 std::vector<std::vector<double>>* member_grads);

struct PretrainOptions {
  int epochs = 0;
  int batch_size = 32;
  double learning_rate = 1e-3;
  bool dropout = true;
};

/// Fits every member independently (own shuffling and dropout stream) to
/// the decayed expert targets of all demonstration states.
void pretrain(ProximityEnsemble& ens, const DemoDataset& demos,
              const PretrainOptions& options, std::uint64_t seed);

/// Progress-difference reward for one transition, from the dropout-off
/// ensemble mean. Sums over a trajectory telescope to mean(s_T) - mean(s_0).
double proximity_reward(const ProximityEnsemble& ens, StateView s, StateView s_next);

}  // namespace grip
