#pragma once

#include <cstdint>
#include <utility>

#include "vareff/data.hpp"

namespace vareff {

/// Synthetic electrostatic-force dataset: columns q1, q2, r, eps and target
/// F = q1*q2 / (4*pi*eps*8.854e-12*r^2), sampled uniformly within the
/// configured ranges.
///
/// The separation range keeps a strictly positive lower bound: letting r
/// approach 0 makes 1/r^2 blow up, which puts unbounded point masses in the
/// regression target and leaves MSE-based fit measures meaningless.
struct CoulombConfig {
  std::size_t n_tuples = 125000;
  std::pair<double, double> q_range{0.0, 10.0};
  std::pair<double, double> r_range{0.5, 1.5};
  std::pair<double, double> eps_range{1.0, 80.0};
  std::uint64_t seed = 0;
};

constexpr double kVacuumPermittivity = 8.854e-12;

DataTable generate_coulomb(const CoulombConfig& config);

}  // namespace vareff
