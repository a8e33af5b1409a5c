#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "vareff/data.hpp"
#include "vareff/predictor.hpp"

namespace vareff {

/// Accumulated-local-effect profile of one feature: K+1 grid edges (in raw
/// variable units when the table carries scaling state) with the centered
/// accumulated effect at each edge (in standardized prediction units) and
/// the occupancy of each of the K bins.
struct ALEProfile {
  std::string variable;
  std::vector<double> grid;
  std::vector<double> effects;
  std::vector<std::size_t> bin_counts;
  bool reduced_grid = false;   // fewer distinct quantile edges than requested
  bool has_empty_bins = false;

  bool operator==(const ALEProfile&) const = default;
};

/// Computes the ALE profile of `var` over nearest-rank quantile bins.
///
/// For every row whose value falls in (z_{k-1}, z_k], the local difference
/// predict(row with var = z_k) - predict(row with var = z_{k-1}) is averaged
/// per bin; bin means are accumulated over the grid and the curve is centered
/// by its occupancy-weighted mean (trapezoidal edge weights), so the profile
/// integrates to zero against the data distribution. Empty bins contribute
/// zero accumulated change; nothing is interpolated across them.
ALEProfile ale_profile(const Predictor& model, const DataTable& table, const std::string& var,
                       std::size_t bins);

/// Profile as ordered (x, y) pairs; the series length K+1 is the resolution
/// the trend tests see.
std::vector<std::pair<double, double>> profile_to_series(const ALEProfile& profile);

}  // namespace vareff
