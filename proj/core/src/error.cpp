#include "vareff/error.hpp"

namespace vareff {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::file_not_found: return "file_not_found";
    case errc::parse_error: return "parse_error";
    case errc::missing_target: return "missing_target";
    case errc::empty_table: return "empty_table";
    case errc::constant_column: return "constant_column";
    case errc::unknown_column: return "unknown_column";
    case errc::invalid_range: return "invalid_range";
    case errc::invalid_config: return "invalid_config";
    case errc::non_finite_loss: return "non_finite_loss";
    case errc::shape_mismatch: return "shape_mismatch";
    case errc::schema_mismatch: return "schema_mismatch";
    case errc::length_mismatch: return "length_mismatch";
    case errc::empty_input: return "empty_input";
    case errc::unstandardized_target: return "unstandardized_target";
    case errc::degenerate_model: return "degenerate_model";
    case errc::zero_baseline: return "zero_baseline";
    case errc::non_finite: return "non_finite";
    case errc::too_short: return "too_short";
    case errc::all_x_equal: return "all_x_equal";
    case errc::degenerate_resampling: return "degenerate_resampling";
    case errc::invalid_interval: return "invalid_interval";
    case errc::too_few_distinct_values: return "too_few_distinct_values";
    case errc::io_error: return "io_error";
    case errc::internal_error: return "internal_error";
  }
  return "unknown";
}

Error::Error(errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

void fail(errc code, const std::string& message) { throw Error(code, message); }

}  // namespace vareff
