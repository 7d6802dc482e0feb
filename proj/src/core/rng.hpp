#pragma once

#include <cstdint>
#include <vector>

namespace driftbench {

// splitmix64 step: advances *state and returns the mixed output.
uint64_t splitmix64(uint64_t* state);

// Derives an independent stream seed from (base, index). Used for per-episode
// seeds and for the named substreams below, so that parallel episode evaluation
// cannot perturb any draw sequence.
uint64_t derive_seed(uint64_t base, uint64_t index);

// Named substream indices. Episode indices live in disjoint ranges per split so
// train/val/test never share a stream.
inline constexpr uint64_t kStreamPool = 0xfffffffffffffff0ull;
inline constexpr uint64_t kStreamPretrain = 0xfffffffffffffff1ull;
inline constexpr uint64_t kStreamMetaTrain = 0xfffffffffffffff2ull;
inline constexpr uint64_t kSplitTestBase = 0;
inline constexpr uint64_t kSplitTrainBase = 1'000'000'000ull;
inline constexpr uint64_t kSplitValBase = 2'000'000'000ull;

// Counter-free stream RNG over splitmix64 with Box-Muller normals.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() { return splitmix64(&state_); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Unbiased uniform integer in [0, n); n must be > 0.
  uint32_t next_below(uint32_t n);

  // Standard normal via Box-Muller; the paired value is cached.
  double next_normal();

  std::vector<double> normal_vector(std::size_t n, double sigma);

  // In-place Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = next_below(static_cast<uint32_t>(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace driftbench
