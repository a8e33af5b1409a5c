#include "vareff/predictor.hpp"

#include <cmath>

#include "vareff/error.hpp"

namespace vareff {

void Predictor::check_schema(const DataTable& table) const {
  const std::vector<std::string> expected = expected_features();
  if (expected.empty()) return;
  const std::vector<std::string> actual = table.feature_names();
  if (actual != expected) {
    std::string msg = "feature columns do not match the training schema; expected [";
    for (std::size_t i = 0; i < expected.size(); ++i)
      msg += (i ? ", " : "") + expected[i];
    msg += "], got [";
    for (std::size_t i = 0; i < actual.size(); ++i) msg += (i ? ", " : "") + actual[i];
    msg += "]";
    fail(errc::schema_mismatch, msg);
  }
}

std::vector<double> FunctionPredictor::predict(const DataTable& table) const {
  const std::vector<std::size_t> features = table.feature_indices();
  std::vector<double> row(features.size());
  std::vector<double> out(table.n_rows());
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    for (std::size_t c = 0; c < features.size(); ++c) row[c] = table.column(features[c])[r];
    const double y = fn_(row);
    if (!std::isfinite(y)) fail(errc::non_finite, "predictor returned a non-finite value");
    out[r] = y;
  }
  return out;
}

}  // namespace vareff
