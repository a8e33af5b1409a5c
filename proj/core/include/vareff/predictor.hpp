#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vareff/data.hpp"

namespace vareff {

/// Contract the explainer consumes: maps the feature columns of a table to
/// one prediction per row. Implementations must be pure and deterministic at
/// inference time and return finite values for finite inputs.
class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual std::vector<double> predict(const DataTable& table) const = 0;

  /// Feature schema the predictor expects (names, in order); empty means
  /// any feature layout is accepted.
  virtual std::vector<std::string> expected_features() const { return {}; }

 protected:
  /// Verifies the table's non-target columns match expected_features()
  /// exactly (names and order).
  void check_schema(const DataTable& table) const;
};

/// Adapts a plain row function to the Predictor contract; the function sees
/// the feature values of one row in table column order.
class FunctionPredictor final : public Predictor {
 public:
  using RowFn = std::function<double(std::span<const double>)>;

  explicit FunctionPredictor(RowFn fn) : fn_(std::move(fn)) {}

  std::vector<double> predict(const DataTable& table) const override;

 private:
  RowFn fn_;
};

}  // namespace vareff
