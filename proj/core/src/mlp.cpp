#include "grip/mlp.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "grip/error.hpp"

namespace grip::nn {

int MlpSpec::layer_in(int layer) const {
  return layer == 0 ? input_dim : hidden_dims[layer - 1];
}

int MlpSpec::layer_out(int layer) const {
  return layer == layer_count() - 1 ? output_dim : hidden_dims[layer];
}

std::size_t MlpSpec::weight_offset(int layer) const {
  std::size_t off = 0;
  for (int l = 0; l < layer; ++l) {
    off += static_cast<std::size_t>(layer_in(l)) * layer_out(l) + layer_out(l);
  }
  return off;
}

std::size_t MlpSpec::bias_offset(int layer) const {
  return weight_offset(layer) +
         static_cast<std::size_t>(layer_in(layer)) * layer_out(layer);
}

std::size_t MlpSpec::param_count() const {
  return weight_offset(layer_count());
}

void MlpSpec::validate() const {
  if (input_dim <= 0 || output_dim <= 0) {
    throw ConfigError("MlpSpec: input_dim and output_dim must be positive");
  }
  for (int h : hidden_dims) {
    if (h <= 0) throw ConfigError("MlpSpec: hidden dims must be positive");
  }
  if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
    throw ConfigError("MlpSpec: dropout_rate must lie in [0, 1)");
  }
}

std::vector<double> init_params(const MlpSpec& spec, Rng& rng) {
  spec.validate();
  std::vector<double> params(spec.param_count(), 0.0);
  for (int l = 0; l < spec.layer_count(); ++l) {
    double bound = std::sqrt(1.0 / spec.layer_in(l));
    double* w = params.data() + spec.weight_offset(l);
    std::size_t n = static_cast<std::size_t>(spec.layer_in(l)) * spec.layer_out(l);
    for (std::size_t i = 0; i < n; ++i) w[i] = uniform(rng, -bound, bound);
  }
  return params;
}

namespace {

inline double activate(Activation act, double z) {
  return act == Activation::kRelu ? (z > 0.0 ? z : 0.0) : std::tanh(z);
}

inline double activate_grad_from_value(Activation act, double h) {
  return act == Activation::kRelu ? (h > 0.0 ? 1.0 : 0.0) : 1.0 - h * h;
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// y = W x + b for one layer.
void affine(const double* w, const double* b, const double* x, int in, int out,
            double* y) {
  for (int o = 0; o < out; ++o) {
    const double* row = w + static_cast<std::size_t>(o) * in;
    double acc = b[o];
    for (int i = 0; i < in; ++i) acc += row[i] * x[i];
    y[o] = acc;
  }
}

}  // namespace

void forward_reuse(const MlpSpec& spec, std::span<const double> params,
                   std::span<const double> x, bool stochastic, Rng* rng,
                   ForwardTrace& trace) {
  require(static_cast<int>(x.size()) == spec.input_dim,
          "forward: input has length " + std::to_string(x.size()) +
              ", expected " + std::to_string(spec.input_dim));
  require(params.size() == spec.param_count(), "forward: parameter count mismatch");
  bool drop = stochastic && spec.dropout_rate > 0.0;
  require(!drop || rng != nullptr, "forward: stochastic dropout needs a generator");

  std::size_t layers = static_cast<std::size_t>(spec.layer_count());
  trace.inputs.resize(layers);
  trace.activations.resize(layers - 1);
  trace.masks.resize(layers - 1);
  trace.stochastic = drop;

  trace.inputs[0].assign(x.begin(), x.end());
  double keep = 1.0 - spec.dropout_rate;
  for (std::size_t l = 0; l < layers; ++l) {
    int in = spec.layer_in(static_cast<int>(l));
    int out = spec.layer_out(static_cast<int>(l));
    std::vector<double>& z =
        l + 1 < layers ? trace.activations[l] : trace.output;
    z.assign(static_cast<std::size_t>(out), 0.0);
    affine(params.data() + spec.weight_offset(static_cast<int>(l)),
           params.data() + spec.bias_offset(static_cast<int>(l)),
           trace.inputs[l].data(), in, out, z.data());
    if (l + 1 < layers) {
      for (double& v : z) v = activate(spec.activation, v);
      std::vector<double>& next_input = trace.inputs[l + 1];
      next_input.assign(z.begin(), z.end());
      trace.masks[l].assign(static_cast<std::size_t>(out), 1.0);
      if (drop) {
        for (int o = 0; o < out; ++o) {
          double m = bernoulli(*rng, keep) ? 1.0 / keep : 0.0;
          next_input[static_cast<std::size_t>(o)] *= m;
          trace.masks[l][static_cast<std::size_t>(o)] = m;
        }
      }
    } else if (spec.output_squash == OutputSquash::kSigmoid) {
      for (double& v : z) v = sigmoid(v);
    }
  }
}

std::vector<double> forward(const MlpSpec& spec, std::span<const double> params,
                            std::span<const double> x, bool stochastic,
                            Rng* rng, ForwardTrace* trace) {
  if (trace) {
    forward_reuse(spec, params, x, stochastic, rng, *trace);
    return trace->output;
  }
  ForwardTrace scratch;
  forward_reuse(spec, params, x, stochastic, rng, scratch);
  return std::move(scratch.output);
}

void backward(const MlpSpec& spec, std::span<const double> params,
              const ForwardTrace& trace, std::span<const double> upstream,
              std::span<double> grad) {
  int layers = spec.layer_count();
  require(static_cast<int>(trace.inputs.size()) == layers &&
              static_cast<int>(trace.masks.size()) == layers - 1 &&
              static_cast<int>(trace.output.size()) == spec.output_dim,
          "backward: trace does not match spec");
  for (int l = 0; l < layers - 1; ++l) {
    require(static_cast<int>(trace.masks[l].size()) == spec.layer_out(l),
            "backward: dropout mask record missing or wrong shape");
  }
  require(static_cast<int>(upstream.size()) == spec.output_dim,
          "backward: upstream gradient has wrong length");
  require(grad.size() == spec.param_count(), "backward: gradient buffer mismatch");

  // Delta at the output layer's pre-activation.
  static thread_local std::vector<double> delta;
  static thread_local std::vector<double> prev_delta;
  delta.assign(upstream.begin(), upstream.end());
  if (spec.output_squash == OutputSquash::kSigmoid) {
    for (int o = 0; o < spec.output_dim; ++o) {
      double y = trace.output[o];
      delta[o] *= y * (1.0 - y);
    }
  }
  for (int l = layers - 1; l >= 0; --l) {
    int in = spec.layer_in(l);
    int out = spec.layer_out(l);
    const double* x = trace.inputs[l].data();
    double* gw = grad.data() + spec.weight_offset(l);
    double* gb = grad.data() + spec.bias_offset(l);
    const double* w = params.data() + spec.weight_offset(l);

    if (l > 0) prev_delta.assign(in, 0.0);
    for (int o = 0; o < out; ++o) {
      double d = delta[o];
      if (d != 0.0) {
        double* grow = gw + static_cast<std::size_t>(o) * in;
        for (int i = 0; i < in; ++i) grow[i] += d * x[i];
        gb[o] += d;
      }
      if (l > 0) {
        const double* wrow = w + static_cast<std::size_t>(o) * in;
        for (int i = 0; i < in; ++i) prev_delta[i] += wrow[i] * d;
      }
    }
    if (l > 0) {
      // Through the previous layer's dropout and activation.
      const auto& mask = trace.masks[l - 1];
      const auto& h = trace.activations[l - 1];
      for (int i = 0; i < in; ++i) {
        prev_delta[i] *= mask[i] * activate_grad_from_value(spec.activation, h[i]);
      }
      delta.swap(prev_delta);
    }
  }
}

}  // namespace grip::nn
