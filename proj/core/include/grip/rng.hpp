#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace grip {

using Rng = std::mt19937_64;

/// Deterministically derives an independent stream seed from a base seed,
/// a purpose tag and up to two indices. Every subsystem draws from its own
/// derived stream, so adding or removing draws in one place never shifts
/// the numbers seen by another.
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                          std::uint64_t a = 0, std::uint64_t b = 0);

Rng derive_rng(std::uint64_t base, std::string_view tag,
               std::uint64_t a = 0, std::uint64_t b = 0);

/// Uniform double in [0, 1).
double uniform01(Rng& rng);

/// Uniform double in [lo, hi).
double uniform(Rng& rng, double lo, double hi);

/// Uniform integer in [0, n). n must be positive.
int uniform_int(Rng& rng, int n);

/// Standard normal via Box-Muller. Self-contained so sampled sequences do
/// not depend on the standard library implementation.
double gaussian(Rng& rng);

/// Bernoulli draw with success probability p.
bool bernoulli(Rng& rng, double p);

/// Fisher-Yates shuffle with our own index sampling, for the same
/// cross-toolchain stability reason as gaussian().
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_int(rng, static_cast<int>(i)));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace grip
