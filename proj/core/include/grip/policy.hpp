#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "grip/adam.hpp"
#include "grip/mlp.hpp"
#include "grip/rng.hpp"

namespace grip {

struct ActionSpec {
  bool discrete = true;
  int dim = 0;  // action count when discrete, action dimension otherwise
  bool operator==(const ActionSpec&) const = default;
};

struct PolicySample {
  std::vector<double> env_action;  // discrete: {index}; continuous: tanh(raw)
  std::vector<double> raw_action;  // continuous pre-squash sample
  double log_prob = 0.0;
};

/// Distribution evaluation for a stored action under the current actor
/// outputs, with the partial derivatives the clipped-surrogate update
/// needs. For continuous actions the log-probability includes the bounded
/// squash correction, so exp(log_prob) is the true density of the squashed
/// action; the entropy term is the unsquashed Gaussian entropy.
struct DistEval {
  double log_prob = 0.0;
  double entropy = 0.0;
  std::vector<double> dlogp_dout;     // wrt actor outputs
  std::vector<double> dentropy_dout;  // wrt actor outputs
  std::vector<double> dlogp_dlogstd;     // continuous only
  std::vector<double> dentropy_dlogstd;  // continuous only
};

/// Actor-critic pair. The actor outputs logits (discrete) or a Gaussian
/// mean (continuous, with a state-independent log-std vector clamped to
/// [-5, 2]); continuous actions are squashed to (-1, 1) with tanh. The
/// critic outputs a scalar value. Neither network uses dropout.
class Policy {
 public:
  struct Options {
    std::vector<int> hidden = {64, 64};
    nn::Activation activation = nn::Activation::kTanh;
    double log_std_init = -0.5;
  };

  Policy(int obs_dim, ActionSpec action_spec, const Options& options,
         std::vector<double> obs_scale, std::uint64_t seed);

  PolicySample sample(std::span<const double> obs, Rng& rng) const;
  std::vector<double> act_deterministic(std::span<const double> obs) const;
  double value(std::span<const double> obs) const;

  std::vector<double> actor_forward(std::span<const double> obs,
                                    nn::ForwardTrace* trace = nullptr) const;
  void actor_backward(const nn::ForwardTrace& trace,
                      std::span<const double> upstream,
                      std::span<double> grad) const;
  double critic_forward(std::span<const double> obs,
                        nn::ForwardTrace* trace = nullptr) const;
  void critic_backward(const nn::ForwardTrace& trace, double upstream,
                       std::span<double> grad) const;

  /// action: stored index (discrete) or the stored raw pre-squash vector.
  DistEval evaluate_action(std::span<const double> actor_out,
                           std::span<const double> action) const;

  const ActionSpec& action_spec() const { return action_spec_; }
  int obs_dim() const { return actor_spec_.input_dim; }
  const nn::MlpSpec& actor_spec() const { return actor_spec_; }
  const nn::MlpSpec& critic_spec() const { return critic_spec_; }
  std::span<const double> log_std() const { return log_std_; }

  struct Grads {
    std::vector<double> actor;
    std::vector<double> critic;
    std::vector<double> log_std;
  };
  Grads make_grads() const;
  /// Adaptive-moment step on all parameter groups, then clamps log-std.
  void apply_grads(const Grads& grads, double learning_rate);

  /// Single-file checkpoint: JSON header line, then actor, critic and
  /// log-std doubles back to back (same binary convention as grip-mlp).
  void save(const std::filesystem::path& path) const;
  static Policy load(const std::filesystem::path& path);

 private:
  Policy() = default;

  nn::MlpSpec actor_spec_;
  nn::MlpSpec critic_spec_;
  ActionSpec action_spec_;
  std::vector<double> obs_scale_;
  std::vector<double> actor_params_;
  std::vector<double> critic_params_;
  std::vector<double> log_std_;
  nn::AdamState actor_opt_;
  nn::AdamState critic_opt_;
  nn::AdamState log_std_opt_;
};

}  // namespace grip
