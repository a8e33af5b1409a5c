#include "vareff/ale.hpp"

#include <algorithm>
#include <cmath>

#include "vareff/error.hpp"
#include "vareff/stats.hpp"

namespace vareff {

ALEProfile ale_profile(const Predictor& model, const DataTable& table, const std::string& var,
                       std::size_t bins) {
  if (bins < 1) fail(errc::invalid_config, "ALE needs at least one bin");
  const std::size_t column = table.column_index(var);
  if (table.target_name() && *table.target_name() == var)
    fail(errc::unknown_column, "'" + var + "' is the target, not a feature");

  const std::vector<double>& values = table.column(column);
  const std::size_t n = values.size();

  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());

  // Nearest-rank quantile edges; duplicates collapse, shrinking the grid.
  std::vector<double> edges;
  edges.push_back(sorted.front());
  for (std::size_t k = 1; k <= bins; ++k) {
    const double p = static_cast<double>(k) / static_cast<double>(bins);
    const double edge = quantile_nearest_rank(sorted, p);
    if (edge > edges.back()) edges.push_back(edge);
  }
  if (edges.size() < 2)
    fail(errc::too_few_distinct_values,
         "column '" + var + "' has too few distinct values for an ALE grid");

  ALEProfile profile;
  profile.variable = var;
  profile.reduced_grid = edges.size() < bins + 1;
  const std::size_t k_eff = edges.size() - 1;

  // Bin index per row: value in (z_{k-1}, z_k] -> k; the minimum joins bin 1.
  std::vector<std::size_t> bin_of_row(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto it = std::lower_bound(edges.begin() + 1, edges.end(), values[r]);
    bin_of_row[r] = static_cast<std::size_t>(it - edges.begin());
    if (bin_of_row[r] > k_eff) bin_of_row[r] = k_eff;
  }

  std::vector<double> upper(n), lower(n);
  for (std::size_t r = 0; r < n; ++r) {
    upper[r] = edges[bin_of_row[r]];
    lower[r] = edges[bin_of_row[r] - 1];
  }
  const std::vector<double> pred_hi = model.predict(table.with_column(var, std::move(upper)));
  const std::vector<double> pred_lo = model.predict(table.with_column(var, std::move(lower)));

  std::vector<double> bin_sum(k_eff, 0.0);
  std::vector<std::size_t> bin_count(k_eff, 0);
  for (std::size_t r = 0; r < n; ++r) {
    bin_sum[bin_of_row[r] - 1] += pred_hi[r] - pred_lo[r];
    ++bin_count[bin_of_row[r] - 1];
  }

  std::vector<double> accumulated(k_eff + 1, 0.0);
  for (std::size_t k = 0; k < k_eff; ++k) {
    const double effect = bin_count[k] > 0
                              ? bin_sum[k] / static_cast<double>(bin_count[k])
                              : 0.0;
    if (bin_count[k] == 0) profile.has_empty_bins = true;
    accumulated[k + 1] = accumulated[k] + effect;
  }

  // Occupancy-weighted centering: each bin weights the mean of its two edge
  // values, so edge j carries (count_j + count_{j+1}) / 2.
  double weighted = 0.0;
  for (std::size_t k = 0; k < k_eff; ++k)
    weighted += static_cast<double>(bin_count[k]) * (accumulated[k] + accumulated[k + 1]) / 2.0;
  const double center = weighted / static_cast<double>(n);
  for (double& e : accumulated) e -= center;

  profile.effects = std::move(accumulated);
  profile.bin_counts = std::move(bin_count);

  // Grid in raw variable units when the table knows its scaling.
  profile.grid = std::move(edges);
  if (table.scaling()) {
    const ScalingParams& scaling = *table.scaling();
    for (double& g : profile.grid) g = g * scaling.sd[column] + scaling.mean[column];
  }
  return profile;
}

std::vector<std::pair<double, double>> profile_to_series(const ALEProfile& profile) {
  if (profile.grid.size() != profile.effects.size())
    fail(errc::shape_mismatch, "profile grid/effects lengths differ");
  std::vector<std::pair<double, double>> series;
  series.reserve(profile.grid.size());
  for (std::size_t i = 0; i < profile.grid.size(); ++i)
    series.emplace_back(profile.grid[i], profile.effects[i]);
  return series;
}

}  // namespace vareff
