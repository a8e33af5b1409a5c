#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vareff {

double mean(std::span<const double> values);

/// Population standard deviation (divide by n).
double population_sd(std::span<const double> values);

/// Sample standard deviation (divide by n-1); 0 for fewer than two values.
double sample_sd(std::span<const double> values);

/// Exact median; even lengths use the midpoint of the two central order
/// statistics. Takes the vector by value (selection is destructive).
double median(std::vector<double> values);

/// Nearest-rank quantile: the ceil(p*n)-th smallest value (p in (0,1]);
/// p == 0 returns the minimum. `sorted` must be ascending and non-empty.
double quantile_nearest_rank(std::span<const double> sorted, double p);

/// Linearly interpolated quantile of an ascending sequence (type 7).
double quantile_interpolated(std::span<const double> sorted, double p);

/// Standard normal CDF.
double normal_cdf(double z);

/// Two-sided standard normal tail probability, 2*(1 - Phi(|z|)).
double normal_two_sided_p(double z);

/// Inverse standard normal CDF (Acklam's rational approximation,
/// |relative error| < 1.2e-9). p must be in (0, 1).
double normal_quantile(double p);

}  // namespace vareff
