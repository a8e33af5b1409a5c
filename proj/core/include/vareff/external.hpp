#pragma once

#include <string>
#include <vector>

#include "vareff/predictor.hpp"

namespace vareff {

/// Predictor served by an external command, so third-party models can be
/// analyzed without linking against them.
///
/// Protocol: for every batch of predictions, a CSV file with header
/// `row_index,<feature...>` is written and the command is invoked with that
/// file path appended as its last argument. The command must print a CSV
/// with header `row_index,prediction` to stdout covering every requested row
/// exactly once (any order). Nonzero exit status aborts the analysis.
class CommandPredictor final : public Predictor {
 public:
  CommandPredictor(std::string command, std::vector<std::string> feature_names);

  std::vector<double> predict(const DataTable& table) const override;
  std::vector<std::string> expected_features() const override { return feature_names_; }

  const std::string& command() const noexcept { return command_; }

 private:
  std::string command_;
  std::vector<std::string> feature_names_;
};

}  // namespace vareff
