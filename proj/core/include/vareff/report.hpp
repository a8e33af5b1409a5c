#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vareff/ale.hpp"
#include "vareff/coulomb.hpp"
#include "vareff/data.hpp"
#include "vareff/effect_size.hpp"
#include "vareff/mlp.hpp"
#include "vareff/trend.hpp"

namespace vareff {

/// How the analyzed model is obtained: trained in-run from an MLPConfig,
/// loaded from a saved model document, or served by an external command.
struct ModelSpec {
  enum class Kind { mlp, model_file, external_command };

  Kind kind = Kind::mlp;
  MLPConfig mlp{};
  std::filesystem::path model_file;
  std::string command;

  bool operator==(const ModelSpec&) const = default;
};

struct AnalysisConfig {
  std::string data = "coulomb";  // CSV path, or the built-in generator name
  std::size_t generator_rows = 125000;
  std::string target = "F";
  ModelSpec model{};
  double train_fraction = 0.8;
  std::size_t sample_size = 10000;         // explanation subset
  std::size_t permutation_rounds = 50;     // B
  std::size_t ale_bins = 100;              // K
  std::size_t mk_lag = 3;
  double alpha = 0.05;
  std::size_t n_boot = 1000;
  double confidence = 0.95;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "vareff-out";
  bool write_plots = true;

  bool operator==(const AnalysisConfig&) const = default;
};

struct ReportFlags {
  bool negative_r2 = false;
  bool empty_bins = false;
  bool not_monotone = false;
  bool reduced_grid = false;

  bool operator==(const ReportFlags&) const = default;
};

struct VariableEffectReport {
  std::string variable;
  F2Result f2;
  MKResult mk;
  TheilSenResult slope_per_step;  // x = grid index; drives the narrative
  TheilSenResult slope_per_unit;  // x = raw variable units
  ALEProfile profile;
  std::string narrative;
  ReportFlags flags;

  bool operator==(const VariableEffectReport&) const = default;
};

struct FullReport {
  int schema_version = 1;
  std::string tool_version;
  AnalysisConfig config;
  std::size_t n_rows = 0;
  std::size_t explanation_rows = 0;
  std::vector<std::string> feature_names;
  double r2 = 0.0;
  double f2_global = 0.0;
  double adjustment = 0.0;
  BaselineResult baseline;
  std::vector<double> loss_trace;
  std::vector<VariableEffectReport> variables;
  std::vector<std::string> warnings;

  bool operator==(const FullReport&) const = default;
};

/// Table-2-style reporting sentence for one variable; a pure function of
/// the effect band, monotonicity decision, slope sign, and slope
/// significance. A negative model R^2 overrides the grid.
std::string narrative_sentence(EffectBand band, bool monotone, double slope, bool slope_significant,
                               bool negative_r2);

/// Full per-variable test: permutation f^2, ALE profile, Mann-Kendall with
/// variance correction, and Theil-Sen slopes with bootstrap intervals.
VariableEffectReport test_variable(const Predictor& model, const DataTable& table,
                                   const std::string& var, const AnalysisConfig& config,
                                   const BaselineResult& baseline, const Rng& run_rng);

/// End-to-end analysis: load or generate data, standardize, obtain the
/// model, sample the explanation subset, run the baseline and every
/// variable, then write the JSON report (plus CSV/SVG exports unless
/// disabled). Deterministic given the config; partial outputs are removed
/// if emission fails.
FullReport run_analysis(const AnalysisConfig& config);

/// Plot/CSV emission for an existing report: one SVG per variable plus a
/// combined profiles.csv. Returns the created files.
std::vector<std::filesystem::path> emit_plots(const FullReport& report,
                                              const std::filesystem::path& out_dir);

std::string serialize_report(const FullReport& report);
FullReport parse_report(const std::string& json_text);

void write_report_file(const FullReport& report, const std::filesystem::path& path);
FullReport load_report_file(const std::filesystem::path& path);

/// Human-readable summary table plus narratives (the `report` subcommand).
std::string render_report_text(const FullReport& report);

}  // namespace vareff
