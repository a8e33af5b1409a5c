#include "vareff/external.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vareff/error.hpp"

namespace vareff {

namespace {

std::filesystem::path unique_query_path() {
  static std::atomic<unsigned long> counter{0};
  std::ostringstream name;
  name << "vareff-query-" << ::getpid() << '-' << counter.fetch_add(1) << ".csv";
  return std::filesystem::temp_directory_path() / name.str();
}

struct FileRemover {
  std::filesystem::path path;
  ~FileRemover() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
};

std::string run_and_capture(const std::string& command) {
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) fail(errc::io_error, "cannot launch '" + command + "'");
  std::string output;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, got);
  const int status = ::pclose(pipe);
  if (status != 0) {
    std::ostringstream msg;
    msg << "external predictor exited with status " << status;
    fail(errc::io_error, msg.str());
  }
  return output;
}

}  // namespace

CommandPredictor::CommandPredictor(std::string command, std::vector<std::string> feature_names)
    : command_(std::move(command)), feature_names_(std::move(feature_names)) {
  if (command_.empty()) fail(errc::invalid_config, "external predictor command is empty");
  if (feature_names_.empty())
    fail(errc::invalid_config, "external predictor needs a feature schema");
}

std::vector<double> CommandPredictor::predict(const DataTable& table) const {
  check_schema(table);
  const std::size_t n = table.n_rows();
  const std::vector<std::size_t> features = table.feature_indices();

  const std::filesystem::path query = unique_query_path();
  FileRemover cleanup{query};
  {
    std::ofstream out(query);
    if (!out) fail(errc::io_error, "cannot write '" + query.string() + "'");
    out << "row_index";
    for (std::size_t c : features) out << ',' << table.names()[c];
    out << '\n';
    char buf[64];
    for (std::size_t r = 0; r < n; ++r) {
      out << r;
      for (std::size_t c : features) {
        const int len = std::snprintf(buf, sizeof(buf), "%.17g", table.column(c)[r]);
        out << ',';
        out.write(buf, len);
      }
      out << '\n';
    }
  }

  const std::string output = run_and_capture(command_ + " " + query.string());

  std::istringstream in(output);
  std::string line;
  if (!std::getline(in, line))
    fail(errc::parse_error, "external predictor produced no output");
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  if (line != "row_index,prediction")
    fail(errc::parse_error, "external predictor header must be 'row_index,prediction'");

  std::vector<double> predictions(n, 0.0);
  std::vector<bool> seen(n, false);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      fail(errc::parse_error, "external prediction row lacks a comma: '" + line + "'");
    std::size_t index = 0;
    double value = 0.0;
    const char* idx_first = line.data();
    const char* idx_last = line.data() + comma;
    const char* val_first = line.data() + comma + 1;
    const char* val_last = line.data() + line.size();
    const auto idx_res = std::from_chars(idx_first, idx_last, index);
    const auto val_res = std::from_chars(val_first, val_last, value);
    if (idx_res.ec != std::errc() || idx_res.ptr != idx_last || val_res.ec != std::errc() ||
        val_res.ptr != val_last || !std::isfinite(value))
      fail(errc::parse_error, "cannot parse external prediction row '" + line + "'");
    if (index >= n) fail(errc::parse_error, "external prediction row index out of range");
    if (seen[index]) fail(errc::parse_error, "duplicate external prediction row index");
    seen[index] = true;
    predictions[index] = value;
    ++rows;
  }
  if (rows != n) {
    std::ostringstream msg;
    msg << "external predictor returned " << rows << " rows, expected " << n;
    fail(errc::parse_error, msg.str());
  }
  return predictions;
}

}  // namespace vareff
