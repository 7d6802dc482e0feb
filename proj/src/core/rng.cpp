#include "core/rng.hpp"

#include <cmath>

namespace driftbench {

uint64_t splitmix64(uint64_t* state) {
  uint64_t z = (*state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

uint64_t derive_seed(uint64_t base, uint64_t index) {
  // Two mixing rounds over (base, index) so adjacent indices give unrelated streams.
  uint64_t s = base;
  uint64_t a = splitmix64(&s);
  s = a ^ index;
  uint64_t b = splitmix64(&s);
  return b;
}

uint32_t Rng::next_below(uint32_t n) {
  // Lemire-style rejection to avoid modulo bias.
  uint64_t threshold = (~uint64_t{0} - n + 1) % n;
  for (;;) {
    uint64_t r = next_u64();
    if (r >= threshold) return static_cast<uint32_t>(r % n);
  }
}

double Rng::next_normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // Box-Muller on (0,1] x [0,1) uniforms; 1-u keeps log away from zero.
  double u1 = 1.0 - next_double();
  double u2 = next_double();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  cached_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

std::vector<double> Rng::normal_vector(std::size_t n, double sigma) {
  std::vector<double> v(n);
  for (auto& x : v) x = sigma * next_normal();
  return v;
}

}  // namespace driftbench
