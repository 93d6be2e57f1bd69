#include "grip/rng.hpp"

#include <cmath>

#include "grip/error.hpp"

namespace grip {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                          std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ base;
  for (char c : tag) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
    h *= 0x100000001b3ULL;
  }
  std::uint64_t state = h;
  splitmix64(state);
  state ^= a * 0x9e3779b97f4a7c15ULL;
  splitmix64(state);
  state ^= b * 0xd1b54a32d192ed03ULL;
  return splitmix64(state);
}

Rng derive_rng(std::uint64_t base, std::string_view tag,
               std::uint64_t a, std::uint64_t b) {
  return Rng(derive_seed(base, tag, a, b));
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

int uniform_int(Rng& rng, int n) {
  require(n > 0, "uniform_int: n must be positive");
  std::uint64_t bound = static_cast<std::uint64_t>(n);
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<int>(x % bound);
}

double gaussian(Rng& rng) {
  // u1 in (0, 1] so the log is finite.
  double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
  double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

bool bernoulli(Rng& rng, double p) {
  return uniform01(rng) < p;
}

}  // namespace grip
