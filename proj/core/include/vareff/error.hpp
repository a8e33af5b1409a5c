#pragma once

#include <stdexcept>
#include <string>

namespace vareff {

/// Failure categories surfaced by the library. The CLI maps these to
/// machine-readable error JSON on stderr.
enum class errc {
  file_not_found,
  parse_error,
  missing_target,
  empty_table,
  constant_column,
  unknown_column,
  invalid_range,
  invalid_config,
  non_finite_loss,
  shape_mismatch,
  schema_mismatch,
  length_mismatch,
  empty_input,
  unstandardized_target,
  degenerate_model,
  zero_baseline,
  non_finite,
  too_short,
  all_x_equal,
  degenerate_resampling,
  invalid_interval,
  too_few_distinct_values,
  io_error,
  internal_error,
};

/// Stable snake_case identifier for an error code.
const char* errc_name(errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message);
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] void fail(errc code, const std::string& message);

}  // namespace vareff
