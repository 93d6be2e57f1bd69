#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "grip/rng.hpp"

namespace grip::nn {

enum class Activation { kRelu, kTanh };
enum class OutputSquash { kNone, kSigmoid };

/// Architecture of a fully connected network. Parameters for a spec live in
/// a flat double array laid out layer by layer: weight matrix (row-major,
/// out x in) followed by the bias vector. Dropout, when enabled, is applied
/// after every hidden activation with inverted scaling 1/(1 - rate); the
/// output layer is never dropped.
struct MlpSpec {
  int input_dim = 0;
  std::vector<int> hidden_dims;
  int output_dim = 0;
  Activation activation = Activation::kTanh;
  double dropout_rate = 0.0;
  OutputSquash output_squash = OutputSquash::kNone;

  int layer_count() const { return static_cast<int>(hidden_dims.size()) + 1; }
  int layer_in(int layer) const;
  int layer_out(int layer) const;
  std::size_t weight_offset(int layer) const;
  std::size_t bias_offset(int layer) const;
  std::size_t param_count() const;

  /// Throws ConfigError on non-positive dims or dropout_rate outside [0, 1).
  void validate() const;

  bool operator==(const MlpSpec&) const = default;
};

/// Everything backward() needs from the paired forward pass: per-layer
/// inputs, post-activation values and the exact dropout realization.
struct ForwardTrace {
  std::vector<std::vector<double>> inputs;       // inputs[l] feeds layer l
  std::vector<std::vector<double>> activations;  // hidden post-activation, pre-dropout
  std::vector<std::vector<double>> masks;        // scaled keep factors per hidden layer
  std::vector<double> output;                    // post-squash
  bool stochastic = false;
};

/// Uniform fan-in initialization: weights in +-sqrt(1/fan_in), biases zero.
std::vector<double> init_params(const MlpSpec& spec, Rng& rng);

/// Evaluates the network. With stochastic=true fresh dropout masks are
/// sampled from rng; with stochastic=false masks are all ones. When trace
/// is non-null the pass is recorded for a later backward(). Throws
/// ContractViolation on an input dimension mismatch.
std::vector<double> forward(const MlpSpec& spec, std::span<const double> params,
                            std::span<const double> x, bool stochastic,
                            Rng* rng, ForwardTrace* trace = nullptr);

/// Same computation writing into trace's buffers, which are reused across
/// calls; the result lives in trace.output until the next pass.
void forward_reuse(const MlpSpec& spec, std::span<const double> params,
                   std::span<const double> x, bool stochastic, Rng* rng,
                   ForwardTrace& trace);

/// Accumulates into grad the exact gradient of <upstream, forward(x)> with
/// respect to every parameter, replaying the dropout realization recorded
/// in trace. grad must have param_count() entries. Throws ContractViolation
/// if the trace does not match the spec (wrong layer count or mask shape).
void backward(const MlpSpec& spec, std::span<const double> params,
              const ForwardTrace& trace, std::span<const double> upstream,
              std::span<double> grad);

}  // namespace grip::nn
