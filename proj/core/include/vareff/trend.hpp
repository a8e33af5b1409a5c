#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vareff/rng.hpp"

namespace vareff {

enum class Trend { increasing, decreasing, no_trend };

const char* trend_name(Trend t) noexcept;

struct MKResult {
  long long s = 0;          // sum of pairwise difference signs
  double variance = 0.0;    // Var(S), tie- and autocorrelation-corrected
  double z = 0.0;           // continuity-corrected normal score
  double p = 1.0;           // two-sided
  Trend trend = Trend::no_trend;
  std::size_t n = 0;
  std::size_t lag = 0;      // autocorrelation correction lag (0 = classic)

  bool operator==(const MKResult&) const = default;
};

/// Mann-Kendall statistic S = sum over i<j of sign(y_j - y_i).
long long mk_s(std::span<const double> series);

/// Classic Mann-Kendall variance with tie correction:
/// [n(n-1)(2n+5) - sum_g t_g(t_g-1)(2t_g+5)] / 18.
double mk_variance(std::span<const double> series);

/// Classic (uncorrected) Mann-Kendall test.
MKResult mk_classic(std::span<const double> series, double alpha = 0.05);

/// Variance-corrected Mann-Kendall test for serially correlated series.
///
/// Rank autocorrelations at lags 1..lag are screened against the two-sided
/// normal bound z_{1-alpha/2}/sqrt(n); the surviving lags inflate Var(S) by
/// n/n* = 1 + 2/(n(n-1)(n-2)) * sum_k (n-k)(n-k-1)(n-k-2) rho_k. With
/// `screen_lags` false, all lags 1..lag enter the sum unconditionally.
MKResult mk_hamed_rao(std::span<const double> series, std::size_t lag = 3, double alpha = 0.05,
                      bool screen_lags = true);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;

  bool operator==(const LineFit&) const = default;
};

/// Median of all pairwise slopes (pairs with equal x skipped); intercept is
/// the median of y - slope*x. Even counts use the midpoint median.
LineFit theil_sen(std::span<const double> x, std::span<const double> y);

/// Percentile bootstrap interval for the Theil-Sen slope: points are
/// resampled with replacement, degenerate resamples (all x equal) are
/// redrawn a bounded number of times.
struct BootstrapInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool operator==(const BootstrapInterval&) const = default;
};

BootstrapInterval theil_sen_ci(std::span<const double> x, std::span<const double> y,
                               std::size_t n_boot, double confidence, Rng& rng);

/// Two-sided p-value recovered from an estimate and its confidence interval:
/// SE = width / (2 * z_confidence), z = |estimate| / SE,
/// p = exp(-0.717 z - 0.416 z^2). A zero-width interval yields p = 0 for a
/// nonzero estimate and p = 1 for a zero estimate.
double p_from_ci(double estimate, double ci_low, double ci_high, double confidence = 0.95);

struct TheilSenResult {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double p = 1.0;
  std::size_t n_boot = 0;
  double confidence = 0.95;

  bool operator==(const TheilSenResult&) const = default;
};

/// Slope, bootstrap interval, and CI-derived p in one call.
TheilSenResult theil_sen_test(std::span<const double> x, std::span<const double> y,
                              std::size_t n_boot, double confidence, Rng& rng);

}  // namespace vareff
