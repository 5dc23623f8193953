#pragma once

#include <cstdint>
#include <random>

namespace skiorder {

/// SplitMix64 finalizer. Used to decorrelate user seeds before they reach the
/// Mersenne Twister and to derive per-trial seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Deterministic child seed for (base, a, b). Independent of scheduling, so
/// parallel and serial ensemble runs see the same streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) noexcept;

// Seeded generator with platform-independent variates. std::mt19937_64's raw
// output is fixed by the standard but the std:: distributions are not, so the
// transforms below are spelled out.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Inclusive range, unbiased (rejection sampling).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace skiorder
