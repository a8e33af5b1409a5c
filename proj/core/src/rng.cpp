#include "vareff/rng.hpp"

#include <cmath>
#include <numbers>

#include "vareff/error.hpp"

namespace vareff {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t Rng::next_u64() { return engine_(); }

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) fail(errc::invalid_range, "Rng::below requires bound > 0");
  // 2^64 mod bound; draws below it would bias x % bound.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) return x % bound;
  }
}

double Rng::unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - unit();  // (0, 1]; keeps log() finite
  const double u2 = unit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Rng Rng::child(std::uint64_t a) const {
  return Rng(mix64(seed_ ^ mix64(a)));
}

Rng Rng::child(std::uint64_t a, std::uint64_t b) const {
  return Rng(mix64(mix64(seed_ ^ mix64(a)) ^ mix64(b)));
}

Rng Rng::child(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
  return Rng(mix64(mix64(mix64(seed_ ^ mix64(a)) ^ mix64(b)) ^ mix64(c)));
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, Rng& rng) {
  if (count > n) fail(errc::invalid_range, "sample size exceeds population");
  std::vector<std::size_t> indices(n);
  for (std::size_t i = 0; i < n; ++i) indices[i] = i;
  // Partial Fisher-Yates: only the first `count` positions need settling.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(count);
  return indices;
}

}  // namespace vareff
