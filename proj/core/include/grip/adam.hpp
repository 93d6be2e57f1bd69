#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace grip::nn {

/// Adaptive-moment state for one flat parameter vector.
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step = 0;
  std::vector<double> m;
  std::vector<double> v;
};

/// One adaptive-moment update with bias correction. Lazily sizes the moment
/// buffers on first use. Throws TrainingError on a non-finite gradient.
void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state, double learning_rate);

/// Rescales grads in place so the global L2 norm over all listed buffers is
/// at most max_norm. Returns the pre-clip norm. max_norm <= 0 disables.
double clip_global_norm(std::span<std::span<double>> grads, double max_norm);

}  // namespace grip::nn
