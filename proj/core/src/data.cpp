#include "vareff/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "vareff/error.hpp"
#include "vareff/stats.hpp"

namespace vareff {

DataTable::DataTable(std::vector<std::string> names, std::vector<std::vector<double>> columns,
                     std::optional<std::string> target)
    : names_(std::move(names)), columns_(std::move(columns)), target_(std::move(target)) {
  if (names_.size() != columns_.size())
    fail(errc::shape_mismatch, "column name count does not match column count");
  if (columns_.empty()) fail(errc::empty_table, "table has no columns");

  n_rows_ = columns_.front().size();
  if (n_rows_ == 0) fail(errc::empty_table, "table has no rows");

  std::unordered_set<std::string> seen;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (names_[c].empty()) fail(errc::parse_error, "empty column name");
    if (!seen.insert(names_[c]).second)
      fail(errc::parse_error, "duplicate column name '" + names_[c] + "'");
    if (columns_[c].size() != n_rows_)
      fail(errc::shape_mismatch, "column '" + names_[c] + "' has inconsistent length");
    for (double v : columns_[c])
      if (!std::isfinite(v))
        fail(errc::non_finite, "non-finite value in column '" + names_[c] + "'");
  }
  if (target_ && !has_column(*target_))
    fail(errc::missing_target, "target column '" + *target_ + "' not present");
}

const std::vector<double>& DataTable::column(std::size_t index) const {
  if (index >= columns_.size()) fail(errc::unknown_column, "column index out of range");
  return columns_[index];
}

const std::vector<double>& DataTable::column(const std::string& name) const {
  return columns_[column_index(name)];
}

std::size_t DataTable::column_index(const std::string& name) const {
  for (std::size_t c = 0; c < names_.size(); ++c)
    if (names_[c] == name) return c;
  fail(errc::unknown_column, "no column named '" + name + "'");
}

bool DataTable::has_column(const std::string& name) const noexcept {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::size_t DataTable::target_index() const {
  if (!target_) fail(errc::missing_target, "table has no target column");
  return column_index(*target_);
}

std::vector<std::size_t> DataTable::feature_indices() const {
  std::vector<std::size_t> indices;
  const std::size_t skip = target_ ? target_index() : columns_.size();
  for (std::size_t c = 0; c < columns_.size(); ++c)
    if (c != skip) indices.push_back(c);
  return indices;
}

std::vector<std::string> DataTable::feature_names() const {
  std::vector<std::string> out;
  for (std::size_t c : feature_indices()) out.push_back(names_[c]);
  return out;
}

DataTable DataTable::with_column(const std::string& name, std::vector<double> values) const {
  const std::size_t index = column_index(name);
  if (values.size() != n_rows_)
    fail(errc::length_mismatch, "replacement for '" + name + "' has wrong length");
  DataTable copy(*this);
  copy.columns_[index] = std::move(values);
  for (double v : copy.columns_[index])
    if (!std::isfinite(v)) fail(errc::non_finite, "non-finite value in column '" + name + "'");
  return copy;
}

DataTable DataTable::select_rows(std::span<const std::size_t> rows) const {
  if (rows.empty()) fail(errc::empty_input, "row selection is empty");
  std::vector<std::vector<double>> cols(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    cols[c].reserve(rows.size());
    for (std::size_t r : rows) {
      if (r >= n_rows_) fail(errc::invalid_range, "row index out of range");
      cols[c].push_back(columns_[c][r]);
    }
  }
  DataTable out(names_, std::move(cols), target_);
  out.scaling_ = scaling_;
  out.notes_ = notes_;
  return out;
}

std::vector<double> DataTable::feature_row(std::size_t row) const {
  if (row >= n_rows_) fail(errc::invalid_range, "row index out of range");
  std::vector<double> out;
  for (std::size_t c : feature_indices()) out.push_back(columns_[c][row]);
  return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  fields.push_back(field);
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool parse_double(const std::string& cell, double& out) {
  const std::string t = trim(cell);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

DataTable load_csv(const std::filesystem::path& path, const std::string& target) {
  std::ifstream in(path);
  if (!in) fail(errc::file_not_found, "cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) fail(errc::empty_table, "'" + path.string() + "' is empty");

  std::vector<std::string> names;
  for (const std::string& raw : split_line(line)) {
    const std::string name = trim(raw);
    if (name.empty()) fail(errc::parse_error, "empty header field in '" + path.string() + "'");
    names.push_back(name);
  }

  std::vector<std::vector<double>> columns(names.size());
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    ++row;
    const std::vector<std::string> fields = split_line(line);
    if (fields.size() != names.size()) {
      std::ostringstream msg;
      msg << "row " << row << " has " << fields.size() << " fields, expected " << names.size();
      fail(errc::parse_error, msg.str());
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double value = 0.0;
      if (!parse_double(fields[c], value)) {
        std::ostringstream msg;
        msg << "row " << row << ", column '" << names[c] << "': cannot parse '" << trim(fields[c])
            << "' as a finite number";
        fail(errc::parse_error, msg.str());
      }
      columns[c].push_back(value);
    }
  }
  if (row == 0) fail(errc::empty_table, "'" + path.string() + "' has a header but no data rows");

  if (std::find(names.begin(), names.end(), target) == names.end())
    fail(errc::missing_target, "target column '" + target + "' not in '" + path.string() + "'");

  return DataTable(std::move(names), std::move(columns), target);
}

void write_csv(const DataTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot write '" + path.string() + "'");
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    if (c) out << ',';
    out << table.names()[c];
  }
  out << '\n';
  char buf[64];
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    for (std::size_t c = 0; c < table.n_cols(); ++c) {
      if (c) out << ',';
      const int len = std::snprintf(buf, sizeof(buf), "%.17g", table.column(c)[r]);
      out.write(buf, len);
    }
    out << '\n';
  }
  if (!out) fail(errc::io_error, "short write to '" + path.string() + "'");
}

std::pair<DataTable, ScalingParams> standardize(const DataTable& table) {
  ScalingParams params;
  std::vector<std::vector<double>> cols;
  cols.reserve(table.n_cols());
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    const std::vector<double>& column = table.column(c);
    const double m = mean(column);
    const double sd = population_sd(column);
    if (sd <= 0.0)
      fail(errc::constant_column, "column '" + table.names()[c] + "' is constant");
    params.names.push_back(table.names()[c]);
    params.mean.push_back(m);
    params.sd.push_back(sd);
    std::vector<double> scaled(column.size());
    for (std::size_t r = 0; r < column.size(); ++r) scaled[r] = (column[r] - m) / sd;
    cols.push_back(std::move(scaled));
  }
  DataTable out(table.names(), std::move(cols), table.target_name());
  out.scaling_ = params;
  out.notes_ = table.notes();
  return {std::move(out), std::move(params)};
}

DataTable unscale(const DataTable& table, const ScalingParams& params) {
  if (params.names != table.names())
    fail(errc::schema_mismatch, "scaling parameters do not match table columns");
  std::vector<std::vector<double>> cols;
  cols.reserve(table.n_cols());
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    const std::vector<double>& column = table.column(c);
    std::vector<double> raw(column.size());
    for (std::size_t r = 0; r < column.size(); ++r)
      raw[r] = column[r] * params.sd[c] + params.mean[c];
    cols.push_back(std::move(raw));
  }
  DataTable out(table.names(), std::move(cols), table.target_name());
  out.notes_ = table.notes();
  return out;
}

DataTable permute_column(const DataTable& table, const std::string& var, Rng& rng) {
  const std::size_t index = table.column_index(var);
  if (table.target_name() && *table.target_name() == var)
    fail(errc::unknown_column, "cannot permute the target column '" + var + "'");
  std::vector<double> shuffled = table.column(index);
  fisher_yates(shuffled, rng);
  return table.with_column(var, std::move(shuffled));
}

DataTable permute_all_columns(const DataTable& table, Rng& rng) {
  DataTable out = table;
  for (std::size_t c : table.feature_indices())
    out = permute_column(out, table.names()[c], rng);
  return out;
}

}  // namespace vareff
