#include "vareff/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "json_detail.hpp"
#include "vareff/error.hpp"
#include "vareff/external.hpp"

#ifndef VAREFF_VERSION_STRING
#define VAREFF_VERSION_STRING "0.0.0"
#endif

namespace vareff {

namespace {

// Child-stream tags; every random decision of a run is keyed off the run
// seed through one of these, in this documented order: data generation,
// train/test split, model seed, explanation sampling, permutation rounds
// (see kPermutationStream), bootstrap resampling.
constexpr std::uint64_t kDataGenStream = 0x10;
constexpr std::uint64_t kSplitStream = 0x20;
constexpr std::uint64_t kModelSeedStream = 0x30;
constexpr std::uint64_t kSampleStream = 0x40;
constexpr std::uint64_t kBootstrapStream = 0x60;

void validate(const AnalysisConfig& config) {
  if (config.data.empty()) fail(errc::invalid_config, "no data source");
  if (config.target.empty()) fail(errc::invalid_config, "no target column name");
  if (config.generator_rows < 1) fail(errc::invalid_config, "generator_rows must be >= 1");
  if (config.sample_size < 1) fail(errc::invalid_config, "sample_size must be >= 1");
  if (config.permutation_rounds < 1) fail(errc::invalid_config, "permutation rounds must be >= 1");
  if (config.ale_bins < 1) fail(errc::invalid_config, "ale_bins must be >= 1");
  if (config.mk_lag < 1) fail(errc::invalid_config, "mk_lag must be >= 1");
  if (!(config.alpha > 0.0 && config.alpha < 1.0))
    fail(errc::invalid_config, "alpha must be in (0,1)");
  if (config.n_boot < 100) fail(errc::invalid_config, "n_boot must be >= 100");
  if (!(config.confidence > 0.0 && config.confidence < 1.0))
    fail(errc::invalid_config, "confidence must be in (0,1)");
  if (!(config.train_fraction > 0.0 && config.train_fraction <= 1.0))
    fail(errc::invalid_config, "train_fraction must be in (0,1]");
  if (config.model.kind == ModelSpec::Kind::external_command && config.model.command.empty())
    fail(errc::invalid_config, "external model kind needs a command");
  if (config.model.kind == ModelSpec::Kind::model_file && config.model.model_file.empty())
    fail(errc::invalid_config, "model_file kind needs a path");
}

std::string sanitize_filename(const std::string& name) {
  std::string out;
  for (char ch : name)
    out += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
  return out.empty() ? std::string("var") : out;
}

std::string format_p(double p) {
  char buf[32];
  if (p < 0.001) return "<0.001";
  std::snprintf(buf, sizeof(buf), "%.3f", p);
  return buf;
}

std::string format_num(double v, const char* fmt = "%.4g") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

VariableEffectReport test_variable(const Predictor& model, const DataTable& table,
                                   const std::string& var, const AnalysisConfig& config,
                                   const BaselineResult& baseline, const Rng& run_rng) {
  VariableEffectReport report;
  report.variable = var;
  report.f2 =
      permutation_f2(model, table, var, config.permutation_rounds, run_rng, baseline);
  report.profile = ale_profile(model, table, var, config.ale_bins);

  const std::size_t column = table.column_index(var);
  const std::vector<double>& effects = report.profile.effects;
  std::vector<double> step_x(effects.size());
  for (std::size_t i = 0; i < step_x.size(); ++i) step_x[i] = static_cast<double>(i);

  report.mk = mk_hamed_rao(effects, config.mk_lag, config.alpha);
  Rng boot_step = run_rng.child(kBootstrapStream, column, 0);
  Rng boot_unit = run_rng.child(kBootstrapStream, column, 1);
  report.slope_per_step =
      theil_sen_test(step_x, effects, config.n_boot, config.confidence, boot_step);
  report.slope_per_unit =
      theil_sen_test(report.profile.grid, effects, config.n_boot, config.confidence, boot_unit);

  const bool monotone = report.mk.p <= config.alpha;
  const bool slope_significant = report.slope_per_step.p <= config.alpha;
  report.narrative = narrative_sentence(report.f2.band, monotone, report.slope_per_step.slope,
                                        slope_significant, report.f2.negative_r2);
  report.flags.negative_r2 = report.f2.negative_r2;
  report.flags.empty_bins = report.profile.has_empty_bins;
  report.flags.not_monotone = !monotone;
  report.flags.reduced_grid = report.profile.reduced_grid;
  return report;
}

namespace {

struct PreparedModel {
  std::unique_ptr<Predictor> predictor;
  std::vector<double> loss_trace;
};

PreparedModel prepare_model(const AnalysisConfig& config, const DataTable& std_table,
                            const Rng& run_rng, std::vector<std::string>& warnings) {
  PreparedModel out;
  switch (config.model.kind) {
    case ModelSpec::Kind::mlp: {
      MLPConfig mlp_config = config.model.mlp;
      mlp_config.seed = run_rng.child(kModelSeedStream).seed();

      const std::size_t n = std_table.n_rows();
      DataTable train_table = std_table;
      if (config.train_fraction < 1.0) {
        const std::size_t n_train = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(config.train_fraction * static_cast<double>(n))));
        Rng split_rng = run_rng.child(kSplitStream);
        const std::vector<std::size_t> train_rows =
            sample_without_replacement(n, std::min(n_train, n), split_rng);
        train_table = std_table.select_rows(train_rows);
      }
      auto mlp = std::make_unique<MLP>(MLP::train_new(mlp_config, train_table));
      out.loss_trace = mlp->loss_trace();
      out.predictor = std::move(mlp);
      return out;
    }
    case ModelSpec::Kind::model_file: {
      auto mlp = std::make_unique<MLP>(MLP::load(config.model.model_file));
      if (mlp->expected_features() != std_table.feature_names())
        fail(errc::schema_mismatch,
             "saved model feature schema does not match the data's feature columns");
      out.loss_trace = mlp->loss_trace();
      warnings.push_back("model loaded from '" + config.model.model_file.string() +
                         "'; data was re-standardized from the provided table");
      out.predictor = std::move(mlp);
      return out;
    }
    case ModelSpec::Kind::external_command:
      out.predictor =
          std::make_unique<CommandPredictor>(config.model.command, std_table.feature_names());
      return out;
  }
  fail(errc::internal_error, "unhandled model kind");
}

}  // namespace

FullReport run_analysis(const AnalysisConfig& config) {
  validate(config);
  const Rng run_rng(config.seed);

  DataTable raw = [&] {
    if (config.data == "coulomb") {
      if (config.target != "F")
        fail(errc::invalid_config, "the coulomb generator produces target column 'F'");
      CoulombConfig gen;
      gen.n_tuples = config.generator_rows;
      gen.seed = run_rng.child(kDataGenStream).seed();
      return generate_coulomb(gen);
    }
    return load_csv(config.data, config.target);
  }();

  FullReport report;
  report.tool_version = VAREFF_VERSION_STRING;
  report.config = config;
  report.n_rows = raw.n_rows();
  report.warnings = raw.notes();

  auto [std_table, scaling] = standardize(raw);
  if (std_table.feature_indices().empty())
    fail(errc::invalid_config, "the table has no feature columns besides the target");
  report.feature_names = std_table.feature_names();

  PreparedModel model = prepare_model(config, std_table, run_rng, report.warnings);
  report.loss_trace = std::move(model.loss_trace);

  std::size_t sample = config.sample_size;
  if (sample > std_table.n_rows()) {
    std::ostringstream note;
    note << "explanation sample clamped from " << sample << " to the table's " << std_table.n_rows()
         << " rows";
    report.warnings.push_back(note.str());
    sample = std_table.n_rows();
  }
  Rng sample_rng = run_rng.child(kSampleStream);
  const std::vector<std::size_t> subset_rows =
      sample_without_replacement(std_table.n_rows(), sample, sample_rng);
  const DataTable subset = std_table.select_rows(subset_rows);
  report.explanation_rows = subset.n_rows();

  report.baseline =
      baseline_f2(*model.predictor, subset, config.permutation_rounds, run_rng);
  report.r2 = report.baseline.r2_full;
  report.f2_global = report.baseline.f2_global;
  report.adjustment = report.baseline.adjustment;

  const std::vector<std::string> features = report.feature_names;
  report.variables.resize(features.size());
  std::vector<std::future<VariableEffectReport>> tasks;
  tasks.reserve(features.size());
  for (const std::string& var : features) {
    tasks.push_back(std::async(std::launch::async, [&, var] {
      return test_variable(*model.predictor, subset, var, config, report.baseline, run_rng);
    }));
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) report.variables[i] = tasks[i].get();

  // Emit outputs; a failure mid-way removes whatever this run created.
  std::vector<std::filesystem::path> created;
  try {
    std::filesystem::create_directories(config.out_dir);
    const std::filesystem::path report_path = config.out_dir / "report.json";
    write_report_file(report, report_path);
    created.push_back(report_path);
    if (config.write_plots) {
      const std::vector<std::filesystem::path> plots = emit_plots(report, config.out_dir);
      created.insert(created.end(), plots.begin(), plots.end());
    }
  } catch (...) {
    for (const std::filesystem::path& path : created) {
      std::error_code ec;
      std::filesystem::remove(path, ec);
    }
    throw;
  }
  return report;
}

std::vector<std::filesystem::path> emit_plots(const FullReport& report,
                                              const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> created;
  std::filesystem::create_directories(out_dir);

  for (const VariableEffectReport& var : report.variables) {
    LineChart chart;
    chart.title = "Accumulated local effects: " + var.variable;
    chart.x_label = var.variable;
    chart.y_label = "accumulated local effect";
    chart.points = profile_to_series(var.profile);
    const std::filesystem::path path =
        out_dir / ("ale_" + sanitize_filename(var.variable) + ".svg");
    std::ofstream out(path);
    if (!out) fail(errc::io_error, "cannot write '" + path.string() + "'");
    write_line_chart(out, chart);
    if (!out) fail(errc::io_error, "short write to '" + path.string() + "'");
    created.push_back(path);
  }

  const std::filesystem::path csv_path = out_dir / "profiles.csv";
  std::ofstream csv(csv_path);
  if (!csv) fail(errc::io_error, "cannot write '" + csv_path.string() + "'");
  csv << "variable,grid,effect,bin_count\n";
  char buf[64];
  for (const VariableEffectReport& var : report.variables) {
    const ALEProfile& profile = var.profile;
    for (std::size_t i = 0; i < profile.grid.size(); ++i) {
      csv << var.variable << ',';
      int len = std::snprintf(buf, sizeof(buf), "%.17g", profile.grid[i]);
      csv.write(buf, len);
      csv << ',';
      len = std::snprintf(buf, sizeof(buf), "%.17g", profile.effects[i]);
      csv.write(buf, len);
      csv << ',' << (i == 0 ? 0 : profile.bin_counts[i - 1]) << '\n';
    }
  }
  if (!csv) fail(errc::io_error, "short write to '" + csv_path.string() + "'");
  created.push_back(csv_path);
  return created;
}

// ---------------------------------------------------------------------------
// JSON serialization

namespace {

using detail::ordered_json;

const char* model_kind_name(ModelSpec::Kind kind) {
  switch (kind) {
    case ModelSpec::Kind::mlp: return "mlp";
    case ModelSpec::Kind::model_file: return "model_file";
    case ModelSpec::Kind::external_command: return "external_command";
  }
  return "mlp";
}

ModelSpec::Kind model_kind_from(const std::string& name) {
  if (name == "mlp") return ModelSpec::Kind::mlp;
  if (name == "model_file") return ModelSpec::Kind::model_file;
  if (name == "external_command") return ModelSpec::Kind::external_command;
  fail(errc::parse_error, "unknown model kind '" + name + "'");
}

EffectBand band_from(const std::string& name) {
  if (name == "trivial") return EffectBand::trivial;
  if (name == "small") return EffectBand::small;
  if (name == "medium") return EffectBand::medium;
  if (name == "large") return EffectBand::large;
  fail(errc::parse_error, "unknown effect band '" + name + "'");
}

Trend trend_from(const std::string& name) {
  if (name == "increasing") return Trend::increasing;
  if (name == "decreasing") return Trend::decreasing;
  if (name == "no_trend") return Trend::no_trend;
  fail(errc::parse_error, "unknown trend '" + name + "'");
}

ordered_json mlp_config_to_json(const MLPConfig& config) {
  ordered_json j;
  j["layer_widths"] = config.layer_widths;
  j["dropout_rate"] = config.dropout_rate;
  if (config.max_norm)
    j["max_norm"] = *config.max_norm;
  else
    j["max_norm"] = nullptr;
  j["l2_lambda"] = config.l2_lambda;
  j["epochs"] = config.epochs;
  j["batch_size"] = config.batch_size;
  j["adam"] = {{"step_size", config.adam.step_size},
               {"beta1", config.adam.beta1},
               {"beta2", config.adam.beta2},
               {"epsilon", config.adam.epsilon}};
  j["seed"] = config.seed;
  return j;
}

MLPConfig mlp_config_from_json(const ordered_json& j) {
  MLPConfig config;
  config.layer_widths = j.at("layer_widths").get<std::vector<int>>();
  config.dropout_rate = j.at("dropout_rate").get<double>();
  if (j.at("max_norm").is_null())
    config.max_norm = std::nullopt;
  else
    config.max_norm = j.at("max_norm").get<double>();
  config.l2_lambda = j.at("l2_lambda").get<double>();
  config.epochs = j.at("epochs").get<int>();
  config.batch_size = j.at("batch_size").get<int>();
  config.adam.step_size = j.at("adam").at("step_size").get<double>();
  config.adam.beta1 = j.at("adam").at("beta1").get<double>();
  config.adam.beta2 = j.at("adam").at("beta2").get<double>();
  config.adam.epsilon = j.at("adam").at("epsilon").get<double>();
  config.seed = j.at("seed").get<std::uint64_t>();
  return config;
}

ordered_json theil_sen_to_json(const TheilSenResult& ts) {
  ordered_json j;
  j["slope"] = ts.slope;
  j["intercept"] = ts.intercept;
  j["ci_low"] = ts.ci_low;
  j["ci_high"] = ts.ci_high;
  j["p"] = ts.p;
  j["n_boot"] = ts.n_boot;
  j["confidence"] = ts.confidence;
  return j;
}

TheilSenResult theil_sen_from_json(const ordered_json& j) {
  TheilSenResult ts;
  ts.slope = j.at("slope").get<double>();
  ts.intercept = j.at("intercept").get<double>();
  ts.ci_low = j.at("ci_low").get<double>();
  ts.ci_high = j.at("ci_high").get<double>();
  ts.p = j.at("p").get<double>();
  ts.n_boot = j.at("n_boot").get<std::size_t>();
  ts.confidence = j.at("confidence").get<double>();
  return ts;
}

}  // namespace

std::string serialize_report(const FullReport& report) {
  ordered_json doc;
  doc["format"] = "vareff-report";
  doc["schema_version"] = report.schema_version;
  doc["tool_version"] = report.tool_version;

  ordered_json cfg;
  cfg["data"] = report.config.data;
  cfg["generator_rows"] = report.config.generator_rows;
  cfg["target"] = report.config.target;
  ordered_json model;
  model["kind"] = model_kind_name(report.config.model.kind);
  model["mlp"] = mlp_config_to_json(report.config.model.mlp);
  model["model_file"] = report.config.model.model_file.string();
  model["command"] = report.config.model.command;
  cfg["model"] = std::move(model);
  cfg["train_fraction"] = report.config.train_fraction;
  cfg["sample_size"] = report.config.sample_size;
  cfg["permutation_rounds"] = report.config.permutation_rounds;
  cfg["ale_bins"] = report.config.ale_bins;
  cfg["mk_lag"] = report.config.mk_lag;
  cfg["alpha"] = report.config.alpha;
  cfg["n_boot"] = report.config.n_boot;
  cfg["confidence"] = report.config.confidence;
  cfg["seed"] = report.config.seed;
  cfg["out_dir"] = report.config.out_dir.string();
  cfg["write_plots"] = report.config.write_plots;
  doc["config"] = std::move(cfg);

  ordered_json data;
  data["n_rows"] = report.n_rows;
  data["explanation_rows"] = report.explanation_rows;
  data["features"] = report.feature_names;
  doc["data"] = std::move(data);

  ordered_json model_result;
  model_result["r2"] = report.r2;
  model_result["f2_global"] = report.f2_global;
  model_result["adjustment"] = report.adjustment;
  ordered_json baseline;
  baseline["r2_full"] = report.baseline.r2_full;
  baseline["r2_base"] = report.baseline.r2_base;
  baseline["f2_base"] = report.baseline.f2_base;
  baseline["f2_global"] = report.baseline.f2_global;
  baseline["adjustment"] = report.baseline.adjustment;
  baseline["rounds"] = report.baseline.rounds;
  baseline["mse_rounds"] = report.baseline.mse_rounds;
  baseline["negative_r2"] = report.baseline.negative_r2;
  model_result["baseline"] = std::move(baseline);
  model_result["loss_trace"] = report.loss_trace;
  doc["model"] = std::move(model_result);

  ordered_json variables = ordered_json::array();
  for (const VariableEffectReport& var : report.variables) {
    ordered_json v;
    v["variable"] = var.variable;
    ordered_json f2;
    f2["r2_full"] = var.f2.r2_full;
    f2["r2_permuted"] = var.f2.r2_permuted;
    f2["f2_raw"] = var.f2.f2_raw;
    f2["f2_adjusted"] = var.f2.f2_adjusted;
    f2["band"] = effect_band_name(var.f2.band);
    f2["rounds"] = var.f2.rounds;
    f2["mse_rounds"] = var.f2.mse_rounds;
    f2["mc_se"] = var.f2.mc_se;
    f2["negative_r2"] = var.f2.negative_r2;
    v["f2"] = std::move(f2);
    ordered_json mk;
    mk["s"] = var.mk.s;
    mk["variance"] = var.mk.variance;
    mk["z"] = var.mk.z;
    mk["p"] = var.mk.p;
    mk["trend"] = trend_name(var.mk.trend);
    mk["n"] = var.mk.n;
    mk["lag"] = var.mk.lag;
    v["mann_kendall"] = std::move(mk);
    v["theil_sen_per_step"] = theil_sen_to_json(var.slope_per_step);
    v["theil_sen_per_unit"] = theil_sen_to_json(var.slope_per_unit);
    ordered_json ale;
    ale["grid"] = var.profile.grid;
    ale["effects"] = var.profile.effects;
    ale["bin_counts"] = var.profile.bin_counts;
    ale["reduced_grid"] = var.profile.reduced_grid;
    ale["empty_bins"] = var.profile.has_empty_bins;
    v["ale"] = std::move(ale);
    v["narrative"] = var.narrative;
    v["flags"] = {{"negative_r2", var.flags.negative_r2},
                  {"empty_bins", var.flags.empty_bins},
                  {"not_monotone", var.flags.not_monotone},
                  {"reduced_grid", var.flags.reduced_grid}};
    variables.push_back(std::move(v));
  }
  doc["variables"] = std::move(variables);
  doc["warnings"] = report.warnings;
  return detail::dump_json(doc) + "\n";
}

FullReport parse_report(const std::string& json_text) {
  const ordered_json doc = detail::parse_json(json_text);
  try {
    if (doc.at("format").get<std::string>() != "vareff-report")
      fail(errc::parse_error, "not a vareff report document");

    FullReport report;
    report.schema_version = doc.at("schema_version").get<int>();
    report.tool_version = doc.at("tool_version").get<std::string>();

    const ordered_json& cfg = doc.at("config");
    report.config.data = cfg.at("data").get<std::string>();
    report.config.generator_rows = cfg.at("generator_rows").get<std::size_t>();
    report.config.target = cfg.at("target").get<std::string>();
    report.config.model.kind = model_kind_from(cfg.at("model").at("kind").get<std::string>());
    report.config.model.mlp = mlp_config_from_json(cfg.at("model").at("mlp"));
    report.config.model.model_file = cfg.at("model").at("model_file").get<std::string>();
    report.config.model.command = cfg.at("model").at("command").get<std::string>();
    report.config.train_fraction = cfg.at("train_fraction").get<double>();
    report.config.sample_size = cfg.at("sample_size").get<std::size_t>();
    report.config.permutation_rounds = cfg.at("permutation_rounds").get<std::size_t>();
    report.config.ale_bins = cfg.at("ale_bins").get<std::size_t>();
    report.config.mk_lag = cfg.at("mk_lag").get<std::size_t>();
    report.config.alpha = cfg.at("alpha").get<double>();
    report.config.n_boot = cfg.at("n_boot").get<std::size_t>();
    report.config.confidence = cfg.at("confidence").get<double>();
    report.config.seed = cfg.at("seed").get<std::uint64_t>();
    report.config.out_dir = cfg.at("out_dir").get<std::string>();
    report.config.write_plots = cfg.at("write_plots").get<bool>();

    report.n_rows = doc.at("data").at("n_rows").get<std::size_t>();
    report.explanation_rows = doc.at("data").at("explanation_rows").get<std::size_t>();
    report.feature_names = doc.at("data").at("features").get<std::vector<std::string>>();

    const ordered_json& model = doc.at("model");
    report.r2 = model.at("r2").get<double>();
    report.f2_global = model.at("f2_global").get<double>();
    report.adjustment = model.at("adjustment").get<double>();
    const ordered_json& baseline = model.at("baseline");
    report.baseline.r2_full = baseline.at("r2_full").get<double>();
    report.baseline.r2_base = baseline.at("r2_base").get<double>();
    report.baseline.f2_base = baseline.at("f2_base").get<double>();
    report.baseline.f2_global = baseline.at("f2_global").get<double>();
    report.baseline.adjustment = baseline.at("adjustment").get<double>();
    report.baseline.rounds = baseline.at("rounds").get<std::size_t>();
    report.baseline.mse_rounds = baseline.at("mse_rounds").get<std::vector<double>>();
    report.baseline.negative_r2 = baseline.at("negative_r2").get<bool>();
    report.loss_trace = model.at("loss_trace").get<std::vector<double>>();

    for (const ordered_json& v : doc.at("variables")) {
      VariableEffectReport var;
      var.variable = v.at("variable").get<std::string>();
      const ordered_json& f2 = v.at("f2");
      var.f2.variable = var.variable;
      var.f2.r2_full = f2.at("r2_full").get<double>();
      var.f2.r2_permuted = f2.at("r2_permuted").get<double>();
      var.f2.f2_raw = f2.at("f2_raw").get<double>();
      var.f2.f2_adjusted = f2.at("f2_adjusted").get<double>();
      var.f2.band = band_from(f2.at("band").get<std::string>());
      var.f2.rounds = f2.at("rounds").get<std::size_t>();
      var.f2.mse_rounds = f2.at("mse_rounds").get<std::vector<double>>();
      var.f2.mc_se = f2.at("mc_se").get<double>();
      var.f2.negative_r2 = f2.at("negative_r2").get<bool>();
      const ordered_json& mk = v.at("mann_kendall");
      var.mk.s = mk.at("s").get<long long>();
      var.mk.variance = mk.at("variance").get<double>();
      var.mk.z = mk.at("z").get<double>();
      var.mk.p = mk.at("p").get<double>();
      var.mk.trend = trend_from(mk.at("trend").get<std::string>());
      var.mk.n = mk.at("n").get<std::size_t>();
      var.mk.lag = mk.at("lag").get<std::size_t>();
      var.slope_per_step = theil_sen_from_json(v.at("theil_sen_per_step"));
      var.slope_per_unit = theil_sen_from_json(v.at("theil_sen_per_unit"));
      const ordered_json& ale = v.at("ale");
      var.profile.variable = var.variable;
      var.profile.grid = ale.at("grid").get<std::vector<double>>();
      var.profile.effects = ale.at("effects").get<std::vector<double>>();
      var.profile.bin_counts = ale.at("bin_counts").get<std::vector<std::size_t>>();
      var.profile.reduced_grid = ale.at("reduced_grid").get<bool>();
      var.profile.has_empty_bins = ale.at("empty_bins").get<bool>();
      var.narrative = v.at("narrative").get<std::string>();
      const ordered_json& flags = v.at("flags");
      var.flags.negative_r2 = flags.at("negative_r2").get<bool>();
      var.flags.empty_bins = flags.at("empty_bins").get<bool>();
      var.flags.not_monotone = flags.at("not_monotone").get<bool>();
      var.flags.reduced_grid = flags.at("reduced_grid").get<bool>();
      report.variables.push_back(std::move(var));
    }
    report.warnings = doc.at("warnings").get<std::vector<std::string>>();
    return report;
  } catch (const ordered_json::exception& e) {
    fail(errc::parse_error, std::string("malformed report document: ") + e.what());
  }
}

void write_report_file(const FullReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot write '" + path.string() + "'");
  const std::string text = serialize_report(report);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(errc::io_error, "short write to '" + path.string() + "'");
}

FullReport load_report_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::file_not_found, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_report(buffer.str());
}

std::string render_report_text(const FullReport& report) {
  std::ostringstream out;
  out << "Model R^2 = " << format_num(report.r2) << "   global f^2 = "
      << format_num(report.f2_global) << "   adjustment a = " << format_num(report.adjustment)
      << "   (B = " << report.baseline.rounds << ", n = " << report.explanation_rows << ")\n\n";

  char line[256];
  std::snprintf(line, sizeof(line), "%-14s %10s %-8s %-11s %-8s %13s %-8s\n", "variable",
                "f^2", "band", "trend", "MK p", "slope/step", "p");
  out << line;
  out << std::string(78, '-') << '\n';
  for (const VariableEffectReport& var : report.variables) {
    const bool suppress = var.flags.negative_r2;
    std::snprintf(line, sizeof(line), "%-14s %10s %-8s %-11s %-8s %13s %-8s\n",
                  var.variable.c_str(), format_num(var.f2.f2_adjusted).c_str(),
                  suppress ? "n/a" : effect_band_name(var.f2.band), trend_name(var.mk.trend),
                  format_p(var.mk.p).c_str(),
                  format_num(var.slope_per_step.slope, "%.3e").c_str(),
                  format_p(var.slope_per_step.p).c_str());
    out << line;
  }
  out << '\n';
  for (const VariableEffectReport& var : report.variables)
    out << var.variable << ": " << var.narrative << '\n';
  if (!report.warnings.empty()) {
    out << "\nwarnings:\n";
    for (const std::string& w : report.warnings) out << "  - " << w << '\n';
  }
  return out.str();
}

}  // namespace vareff
