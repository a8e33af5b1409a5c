#include "vareff/trend.hpp"

#include <algorithm>
#include <cmath>

#include "vareff/error.hpp"
#include "vareff/stats.hpp"

namespace vareff {

const char* trend_name(Trend t) noexcept {
  switch (t) {
    case Trend::increasing: return "increasing";
    case Trend::decreasing: return "decreasing";
    case Trend::no_trend: return "no_trend";
  }
  return "no_trend";
}

long long mk_s(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 2) fail(errc::too_short, "Mann-Kendall needs at least 2 points");
  long long s = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (series[j] > series[i])
        ++s;
      else if (series[j] < series[i])
        --s;
    }
  }
  return s;
}

double mk_variance(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 2) fail(errc::too_short, "Mann-Kendall needs at least 2 points");
  std::vector<double> sorted(series.begin(), series.end());
  std::sort(sorted.begin(), sorted.end());

  const double nd = static_cast<double>(n);
  double var = nd * (nd - 1.0) * (2.0 * nd + 5.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    if (t > 1.0) var -= t * (t - 1.0) * (2.0 * t + 5.0);
    i = j;
  }
  return var / 18.0;
}

namespace {

MKResult finish_mk(long long s, double variance, std::size_t n, std::size_t lag, double alpha) {
  MKResult result;
  result.s = s;
  result.variance = variance;
  result.n = n;
  result.lag = lag;
  if (s > 0)
    result.z = (static_cast<double>(s) - 1.0) / std::sqrt(variance);
  else if (s < 0)
    result.z = (static_cast<double>(s) + 1.0) / std::sqrt(variance);
  else
    result.z = 0.0;
  result.p = normal_two_sided_p(result.z);
  if (result.p <= alpha && s > 0)
    result.trend = Trend::increasing;
  else if (result.p <= alpha && s < 0)
    result.trend = Trend::decreasing;
  else
    result.trend = Trend::no_trend;
  return result;
}

/// Average (fractional) ranks, 1-based; ties share the mean rank.
std::vector<double> average_ranks(std::span<const double> series) {
  const std::size_t n = series.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return series[a] < series[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && series[order[j]] == series[order[i]]) ++j;
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = shared;
    i = j;
  }
  return ranks;
}

}  // namespace

MKResult mk_classic(std::span<const double> series, double alpha) {
  return finish_mk(mk_s(series), mk_variance(series), series.size(), 0, alpha);
}

MKResult mk_hamed_rao(std::span<const double> series, std::size_t lag, double alpha,
                      bool screen_lags) {
  const std::size_t n = series.size();
  if (lag < 1) fail(errc::invalid_config, "correction lag must be >= 1");
  if (n < lag + 2) fail(errc::too_short, "series shorter than lag + 2");

  const long long s = mk_s(series);
  const double var = mk_variance(series);

  const std::vector<double> ranks = average_ranks(series);
  const double rank_mean = mean(ranks);
  double denom = 0.0;
  for (double r : ranks) denom += (r - rank_mean) * (r - rank_mean);

  const double nd = static_cast<double>(n);
  double correction_sum = 0.0;
  if (denom > 0.0) {
    const double bound = normal_quantile(1.0 - alpha / 2.0) / std::sqrt(nd);
    for (std::size_t k = 1; k <= lag; ++k) {
      double num = 0.0;
      for (std::size_t i = 0; i + k < n; ++i)
        num += (ranks[i] - rank_mean) * (ranks[i + k] - rank_mean);
      const double rho = num / denom;
      if (screen_lags && std::abs(rho) <= bound) continue;
      const double nk = nd - static_cast<double>(k);
      correction_sum += nk * (nk - 1.0) * (nk - 2.0) * rho;
    }
  }

  double factor = 1.0 + 2.0 / (nd * (nd - 1.0) * (nd - 2.0)) * correction_sum;
  double corrected = var * factor;
  if (factor <= 0.0) corrected = var * 1e-6;

  return finish_mk(s, corrected, n, lag, alpha);
}

LineFit theil_sen(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(errc::length_mismatch, "x and y lengths differ");
  const std::size_t n = x.size();
  if (n < 2) fail(errc::too_short, "Theil-Sen needs at least 2 points");

  std::vector<double> slopes;
  slopes.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (x[j] != x[i]) slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
  if (slopes.empty()) fail(errc::all_x_equal, "all x values equal");

  LineFit fit;
  fit.slope = median(std::move(slopes));
  std::vector<double> residuals(n);
  for (std::size_t i = 0; i < n; ++i) residuals[i] = y[i] - fit.slope * x[i];
  fit.intercept = median(std::move(residuals));
  return fit;
}

BootstrapInterval theil_sen_ci(std::span<const double> x, std::span<const double> y,
                               std::size_t n_boot, double confidence, Rng& rng) {
  if (x.size() != y.size()) fail(errc::length_mismatch, "x and y lengths differ");
  const std::size_t n = x.size();
  if (n < 3) fail(errc::too_short, "bootstrap CI needs at least 3 points");
  if (n_boot < 100) fail(errc::invalid_config, "n_boot must be >= 100");
  if (!(confidence > 0.0 && confidence < 1.0))
    fail(errc::invalid_config, "confidence must be in (0,1)");

  constexpr int kMaxRedraws = 100;
  std::vector<double> bx(n), by(n), slopes(n_boot);
  for (std::size_t b = 0; b < n_boot; ++b) {
    int attempt = 0;
    for (;;) {
      bool has_distinct_x = false;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t pick = static_cast<std::size_t>(rng.below(n));
        bx[i] = x[pick];
        by[i] = y[pick];
        if (bx[i] != bx[0]) has_distinct_x = true;
      }
      if (has_distinct_x) break;
      if (++attempt >= kMaxRedraws)
        fail(errc::degenerate_resampling, "resamples keep collapsing to a single x value");
    }
    slopes[b] = theil_sen(bx, by).slope;
  }
  std::sort(slopes.begin(), slopes.end());
  const double tail = (1.0 - confidence) / 2.0;
  return {quantile_interpolated(slopes, tail), quantile_interpolated(slopes, 1.0 - tail)};
}

double p_from_ci(double estimate, double ci_low, double ci_high, double confidence) {
  if (!(ci_low <= ci_high)) fail(errc::invalid_interval, "ci_low exceeds ci_high");
  if (!(confidence > 0.0 && confidence < 1.0))
    fail(errc::invalid_interval, "confidence must be in (0,1)");
  if (!std::isfinite(estimate) || !std::isfinite(ci_low) || !std::isfinite(ci_high))
    fail(errc::non_finite, "non-finite interval or estimate");

  // The published approximation is calibrated with 1.96 at the 95% level;
  // other levels scale by the matching two-sided normal quantile.
  const double z_conf =
      std::abs(confidence - 0.95) < 1e-12 ? 1.96 : normal_quantile(1.0 - (1.0 - confidence) / 2.0);
  const double se = (ci_high - ci_low) / (2.0 * z_conf);
  if (se == 0.0) return estimate == 0.0 ? 1.0 : 0.0;
  const double z = std::abs(estimate) / se;
  const double p = std::exp(-0.717 * z - 0.416 * z * z);
  return std::clamp(p, 0.0, 1.0);
}

TheilSenResult theil_sen_test(std::span<const double> x, std::span<const double> y,
                              std::size_t n_boot, double confidence, Rng& rng) {
  const LineFit fit = theil_sen(x, y);
  const BootstrapInterval ci = theil_sen_ci(x, y, n_boot, confidence, rng);
  TheilSenResult result;
  result.slope = fit.slope;
  result.intercept = fit.intercept;
  result.ci_low = ci.lo;
  result.ci_high = ci.hi;
  result.p = p_from_ci(fit.slope, ci.lo, ci.hi, confidence);
  result.n_boot = n_boot;
  result.confidence = confidence;
  return result;
}

}  // namespace vareff
