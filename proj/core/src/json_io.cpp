#include "json_detail.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "vareff/error.hpp"

namespace vareff::detail {

std::string format_double(double value) {
  if (!std::isfinite(value)) fail(errc::non_finite, "cannot serialize a non-finite number");
  char buf[40];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", value);
  std::string text(buf, static_cast<std::size_t>(len));
  // Keep the value recognizably floating-point after a round-trip.
  if (text.find_first_of(".eE") == std::string::npos) text += ".0";
  return text;
}

namespace {

void dump_value(const ordered_json& value, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  switch (value.type()) {
    case ordered_json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = value.begin(); it != value.end(); ++it, ++i) {
        out += pad_in;
        out += ordered_json(it.key()).dump();
        out += ": ";
        dump_value(it.value(), out, indent, depth + 1);
        if (i + 1 < value.size()) out += ',';
        out += '\n';
      }
      out += pad + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      // Scalar-only arrays stay on one line; nested structures get expanded.
      bool scalars = true;
      for (const auto& item : value)
        if (item.is_structured()) scalars = false;
      if (scalars) {
        out += '[';
        for (std::size_t i = 0; i < value.size(); ++i) {
          if (i) out += ", ";
          dump_value(value[i], out, indent, depth);
        }
        out += ']';
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < value.size(); ++i) {
        out += pad_in;
        dump_value(value[i], out, indent, depth + 1);
        if (i + 1 < value.size()) out += ',';
        out += '\n';
      }
      out += pad + "]";
      return;
    }
    case ordered_json::value_t::number_float:
      out += format_double(value.get<double>());
      return;
    default:
      out += value.dump();  // strings, integers, booleans, null
      return;
  }
}

}  // namespace

std::string dump_json(const ordered_json& doc, int indent) {
  std::string out;
  dump_value(doc, out, indent, 0);
  return out;
}

ordered_json parse_json(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    fail(errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace vareff::detail
