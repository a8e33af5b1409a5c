#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vareff/rng.hpp"

namespace vareff {

/// Per-column standardization parameters. `sd` is the population standard
/// deviation (divide by n), so a standardized target has unit population
/// variance and R^2 = 1 - MSE holds exactly.
struct ScalingParams {
  std::vector<std::string> names;
  std::vector<double> mean;
  std::vector<double> sd;

  bool operator==(const ScalingParams&) const = default;
};

/// Immutable column-major numeric table.
///
/// Invariants enforced on construction: at least one row, equal column
/// lengths, unique non-empty column names, finite values only. Operations
/// return new tables; a table never mutates after construction, so sharing
/// one across threads is safe.
class DataTable {
 public:
  DataTable(std::vector<std::string> names, std::vector<std::vector<double>> columns,
            std::optional<std::string> target = std::nullopt);

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return columns_.size(); }

  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<double>& column(std::size_t index) const;
  const std::vector<double>& column(const std::string& name) const;
  std::size_t column_index(const std::string& name) const;
  bool has_column(const std::string& name) const noexcept;

  const std::optional<std::string>& target_name() const noexcept { return target_; }
  std::size_t target_index() const;

  /// Indices of all non-target columns, in table order.
  std::vector<std::size_t> feature_indices() const;
  std::vector<std::string> feature_names() const;

  /// Standardization state; set on tables produced by standardize().
  const std::optional<ScalingParams>& scaling() const noexcept { return scaling_; }
  bool standardized() const noexcept { return scaling_.has_value(); }

  /// Free-form provenance notes (e.g. generator range adjustments).
  const std::vector<std::string>& notes() const noexcept { return notes_; }

  DataTable with_column(const std::string& name, std::vector<double> values) const;
  DataTable select_rows(std::span<const std::size_t> rows) const;

  /// Row values over the feature columns, in table order.
  std::vector<double> feature_row(std::size_t row) const;

 private:
  friend std::pair<DataTable, ScalingParams> standardize(const DataTable&);
  friend DataTable unscale(const DataTable&, const ScalingParams&);
  friend DataTable generate_coulomb(const struct CoulombConfig&);

  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  std::size_t n_rows_ = 0;
  std::optional<std::string> target_;
  std::optional<ScalingParams> scaling_;
  std::vector<std::string> notes_;
};

/// Strict numeric CSV ingestion: comma separator, '.' decimal point, UTF-8,
/// first row is the header. Any unparseable or non-finite cell aborts the
/// load with the offending 1-based data row and column name.
DataTable load_csv(const std::filesystem::path& path, const std::string& target);

void write_csv(const DataTable& table, const std::filesystem::path& path);

/// Z-scores every column (population sd). Constant columns are rejected.
std::pair<DataTable, ScalingParams> standardize(const DataTable& table);

/// Inverse of standardize(); exact round-trip within float arithmetic.
DataTable unscale(const DataTable& table, const ScalingParams& params);

/// Copy of `table` with column `var` replaced by a uniform random
/// permutation of its values. `var` must not be the target.
DataTable permute_column(const DataTable& table, const std::string& var, Rng& rng);

/// Permutes every non-target column independently, consuming `rng` in
/// column order.
DataTable permute_all_columns(const DataTable& table, Rng& rng);

}  // namespace vareff
