#pragma once

#include <string>

#include <json.hpp>

namespace vareff::detail {

using ordered_json = nlohmann::ordered_json;

/// Serializes with insertion-ordered keys and floating-point numbers printed
/// at 17 significant digits ("%.17g"), which round-trips doubles exactly and
/// keeps report files byte-stable for diffing.
std::string dump_json(const ordered_json& doc, int indent = 2);

ordered_json parse_json(const std::string& text);

std::string format_double(double value);

}  // namespace vareff::detail
