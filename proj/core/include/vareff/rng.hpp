#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace vareff {

/// SplitMix64 finalizer; used to derive child stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Deterministic random stream.
///
/// Wraps std::mt19937_64 (whose output sequence is fully specified by the
/// standard) with fixed bounded-integer and floating-point draws, because the
/// std distribution objects are implementation-defined and would break
/// cross-platform reproducibility of permutation streams.
///
/// Child streams are derived from the seed this stream was *created* with,
/// not from its current position, so `child(...)` is a pure function of
/// (seed, path). Analyses key every permutation round, bootstrap, and
/// sampling step off such children, which makes full reports a pure function
/// of one run seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64();

  /// Uniform integer in [0, bound); unbiased via rejection. bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double unit();

  double uniform(double lo, double hi);

  /// Standard normal deviate (Box-Muller; pairs cached).
  double normal();

  Rng child(std::uint64_t a) const;
  Rng child(std::uint64_t a, std::uint64_t b) const;
  Rng child(std::uint64_t a, std::uint64_t b, std::uint64_t c) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// In-place Fisher-Yates shuffle (uniform over permutations).
template <typename T>
void fisher_yates(std::vector<T>& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(values[i - 1], values[j]);
  }
}

/// First `count` elements of a uniform random permutation of 0..n-1
/// (sampling without replacement). count must be <= n.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, Rng& rng);

}  // namespace vareff
