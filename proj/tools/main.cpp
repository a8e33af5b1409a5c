// vareff: permutation effect sizes and ALE trend tests for black-box
// regression models.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "vareff/coulomb.hpp"
#include "vareff/data.hpp"
#include "vareff/error.hpp"
#include "vareff/mlp.hpp"
#include "vareff/report.hpp"

namespace {

using vareff::AnalysisConfig;
using vareff::ModelSpec;

void print_error_json(const std::string& code, const std::string& message) {
  nlohmann::ordered_json err;
  err["error"] = {{"code", code}, {"message", message}};
  std::cerr << err.dump(2) << std::endl;
}

/// Lenient config-file loader: absent keys keep their defaults, so a file
/// can pin any subset of the analyze options.
AnalysisConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) vareff::fail(vareff::errc::file_not_found, "cannot open '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    vareff::fail(vareff::errc::parse_error,
                 "invalid config file '" + path.string() + "': " + e.what());
  }

  AnalysisConfig config;
  const auto get = [&](const char* key, auto& field) {
    if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("data", config.data);
  get("generator_rows", config.generator_rows);
  get("target", config.target);
  get("train_fraction", config.train_fraction);
  get("sample_size", config.sample_size);
  get("permutation_rounds", config.permutation_rounds);
  get("ale_bins", config.ale_bins);
  get("mk_lag", config.mk_lag);
  get("alpha", config.alpha);
  get("n_boot", config.n_boot);
  get("confidence", config.confidence);
  get("seed", config.seed);
  if (doc.contains("out_dir")) config.out_dir = doc.at("out_dir").get<std::string>();
  get("write_plots", config.write_plots);

  if (doc.contains("model")) {
    const nlohmann::json& model = doc.at("model");
    if (model.contains("kind")) {
      const std::string kind = model.at("kind").get<std::string>();
      if (kind == "mlp")
        config.model.kind = ModelSpec::Kind::mlp;
      else if (kind == "model_file")
        config.model.kind = ModelSpec::Kind::model_file;
      else if (kind == "external_command")
        config.model.kind = ModelSpec::Kind::external_command;
      else
        vareff::fail(vareff::errc::invalid_config, "unknown model kind '" + kind + "'");
    }
    if (model.contains("model_file"))
      config.model.model_file = model.at("model_file").get<std::string>();
    if (model.contains("command")) config.model.command = model.at("command").get<std::string>();
    if (model.contains("mlp")) {
      const nlohmann::json& mlp = model.at("mlp");
      auto& cfg = config.model.mlp;
      if (mlp.contains("layer_widths"))
        cfg.layer_widths = mlp.at("layer_widths").get<std::vector<int>>();
      if (mlp.contains("dropout_rate")) cfg.dropout_rate = mlp.at("dropout_rate").get<double>();
      if (mlp.contains("max_norm")) {
        if (mlp.at("max_norm").is_null())
          cfg.max_norm = std::nullopt;
        else
          cfg.max_norm = mlp.at("max_norm").get<double>();
      }
      if (mlp.contains("l2_lambda")) cfg.l2_lambda = mlp.at("l2_lambda").get<double>();
      if (mlp.contains("epochs")) cfg.epochs = mlp.at("epochs").get<int>();
      if (mlp.contains("batch_size")) cfg.batch_size = mlp.at("batch_size").get<int>();
      if (mlp.contains("adam")) {
        const nlohmann::json& adam = mlp.at("adam");
        if (adam.contains("step_size")) cfg.adam.step_size = adam.at("step_size").get<double>();
        if (adam.contains("beta1")) cfg.adam.beta1 = adam.at("beta1").get<double>();
        if (adam.contains("beta2")) cfg.adam.beta2 = adam.at("beta2").get<double>();
        if (adam.contains("epsilon")) cfg.adam.epsilon = adam.at("epsilon").get<double>();
      }
    }
  }
  return config;
}

std::vector<int> widths_from_hidden(const std::vector<int>& hidden) {
  std::vector<int> widths = hidden;
  widths.push_back(1);
  return widths;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypothesis testing for black-box regression models: permutation-based "
               "Cohen's f^2 per variable plus Mann-Kendall/Theil-Sen trend tests on "
               "accumulated-local-effect profiles."};
  app.require_subcommand(1);

  // --- generate ------------------------------------------------------------
  auto* generate = app.add_subcommand("generate", "Write a synthetic Coulomb-law dataset as CSV");
  vareff::CoulombConfig gen_config;
  std::string gen_out = "coulomb.csv";
  generate->add_option("--rows,-n", gen_config.n_tuples, "Number of tuples")
      ->capture_default_str();
  generate->add_option("--seed", gen_config.seed, "RNG seed")->capture_default_str();
  generate->add_option("--q-min", gen_config.q_range.first, "Charge lower bound")
      ->capture_default_str();
  generate->add_option("--q-max", gen_config.q_range.second, "Charge upper bound")
      ->capture_default_str();
  generate->add_option("--r-min", gen_config.r_range.first, "Separation lower bound (> 0)")
      ->capture_default_str();
  generate->add_option("--r-max", gen_config.r_range.second, "Separation upper bound")
      ->capture_default_str();
  generate->add_option("--eps-min", gen_config.eps_range.first, "Permittivity lower bound")
      ->capture_default_str();
  generate->add_option("--eps-max", gen_config.eps_range.second, "Permittivity upper bound")
      ->capture_default_str();
  generate->add_option("--out,-o", gen_out, "Output CSV path")->capture_default_str();

  // --- train ---------------------------------------------------------------
  auto* train = app.add_subcommand("train", "Train the built-in feedforward regressor on a CSV");
  std::string train_data, train_target;
  std::string train_out = "model.json";
  double train_split = 0.8;
  vareff::MLPConfig train_mlp;
  std::vector<int> train_hidden{50, 50, 50};
  double train_max_norm = 5.0;
  train->add_option("--data", train_data, "Training CSV")->required();
  train->add_option("--target", train_target, "Target column name")->required();
  train->add_option("--out,-o", train_out, "Model output path")->capture_default_str();
  train->add_option("--seed", train_mlp.seed, "Training seed")->capture_default_str();
  train->add_option("--split", train_split, "Training fraction of rows (rest held out)")
      ->capture_default_str();
  train->add_option("--hidden", train_hidden, "Hidden layer widths")->capture_default_str();
  train->add_option("--dropout", train_mlp.dropout_rate, "Dropout rate")->capture_default_str();
  train->add_option("--max-norm", train_max_norm, "Max-norm weight constraint (0 disables)")
      ->capture_default_str();
  train->add_option("--l2", train_mlp.l2_lambda, "L2 penalty weight")->capture_default_str();
  train->add_option("--epochs", train_mlp.epochs, "Training epochs")->capture_default_str();
  train->add_option("--batch", train_mlp.batch_size, "Minibatch size")->capture_default_str();
  train->add_option("--lr", train_mlp.adam.step_size, "Adam step size")->capture_default_str();

  // --- analyze ---------------------------------------------------------------
  auto* analyze = app.add_subcommand(
      "analyze", "Run the full pipeline: train/wrap a model, then per-variable effect "
                 "sizes, ALE profiles, and trend tests");
  std::string config_path;
  analyze->add_option("--config", config_path, "JSON config file (flags override it)");
  std::string an_data, an_target, an_out, an_model_file, an_model_cmd;
  std::uint64_t an_seed = 0;
  std::size_t an_rounds = 0, an_bins = 0, an_lag = 0, an_boot = 0, an_sample = 0, an_gen_rows = 0;
  double an_alpha = 0.0, an_train_frac = 0.0, an_confidence = 0.0;
  std::vector<int> an_hidden;
  double an_dropout = -1.0, an_max_norm = -1.0, an_l2 = -1.0, an_lr = 0.0;
  int an_epochs = 0, an_batch = 0;
  bool an_no_plots = false;
  auto* opt_data =
      analyze->add_option("--data", an_data, "CSV path, or 'coulomb' for the built-in generator");
  auto* opt_target = analyze->add_option("--target", an_target, "Target column name");
  auto* opt_seed = analyze->add_option("--seed", an_seed, "Run seed (drives every random step)");
  auto* opt_rounds = analyze->add_option("--permutations,-B", an_rounds, "Permutation rounds B");
  auto* opt_bins = analyze->add_option("--grid,-K", an_bins, "ALE grid bins K");
  auto* opt_lag = analyze->add_option("--lag", an_lag, "Mann-Kendall correction lag");
  auto* opt_alpha = analyze->add_option("--alpha", an_alpha, "Significance level");
  auto* opt_boot = analyze->add_option("--boot", an_boot, "Bootstrap resamples for slope CIs");
  auto* opt_sample = analyze->add_option("--sample", an_sample, "Explanation subset size");
  auto* opt_out = analyze->add_option("--out,-o", an_out, "Output directory");
  auto* opt_gen_rows =
      analyze->add_option("--gen-rows", an_gen_rows, "Rows for the built-in generator");
  auto* opt_frac = analyze->add_option("--train-frac", an_train_frac,
                                       "Fraction of rows used for training the built-in model");
  auto* opt_conf = analyze->add_option("--confidence", an_confidence, "Bootstrap CI level");
  auto* opt_model_file =
      analyze->add_option("--model-file", an_model_file, "Analyze a saved vareff model document");
  auto* opt_model_cmd = analyze->add_option(
      "--model-cmd", an_model_cmd,
      "External predictor command (receives a query CSV path, prints row_index,prediction)");
  opt_model_file->excludes(opt_model_cmd);
  auto* opt_hidden = analyze->add_option("--hidden", an_hidden, "Hidden layer widths");
  auto* opt_dropout = analyze->add_option("--dropout", an_dropout, "Dropout rate");
  auto* opt_maxnorm = analyze->add_option("--max-norm", an_max_norm, "Max-norm constraint (0 disables)");
  auto* opt_l2 = analyze->add_option("--l2", an_l2, "L2 penalty weight");
  auto* opt_epochs = analyze->add_option("--epochs", an_epochs, "Training epochs");
  auto* opt_batch = analyze->add_option("--batch", an_batch, "Minibatch size");
  auto* opt_lr = analyze->add_option("--lr", an_lr, "Adam step size");
  analyze->add_flag("--no-plots", an_no_plots, "Skip SVG/CSV profile exports");

  // --- report ----------------------------------------------------------------
  auto* report_cmd = app.add_subcommand("report", "Render a stored report; optionally re-emit plots");
  std::string report_path, report_plots_dir;
  report_cmd->add_option("--report,-r", report_path, "Path to report.json")->required();
  report_cmd->add_option("--plots", report_plots_dir, "Re-emit SVG/CSV exports into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    print_error_json("invalid_config", e.what());
    return 1;
  }

  try {
    if (*generate) {
      const vareff::DataTable table = generate_coulomb(gen_config);
      write_csv(table, gen_out);
      std::cout << "wrote " << table.n_rows() << " rows to " << gen_out << '\n';
      for (const std::string& note : table.notes()) std::cout << "note: " << note << '\n';
      return 0;
    }

    if (*train) {
      if (train_max_norm <= 0.0)
        train_mlp.max_norm = std::nullopt;
      else
        train_mlp.max_norm = train_max_norm;
      train_mlp.layer_widths = widths_from_hidden(train_hidden);

      const vareff::DataTable raw = vareff::load_csv(train_data, train_target);
      auto [std_table, scaling] = vareff::standardize(raw);
      vareff::DataTable train_table = std_table;
      if (train_split < 1.0) {
        if (!(train_split > 0.0))
          vareff::fail(vareff::errc::invalid_config, "--split must be in (0,1]");
        const auto n = std_table.n_rows();
        const auto n_train = std::max<std::size_t>(
            1, static_cast<std::size_t>(train_split * static_cast<double>(n)));
        vareff::Rng split_rng = vareff::Rng(train_mlp.seed).child(3);
        const auto rows = vareff::sample_without_replacement(n, n_train, split_rng);
        train_table = std_table.select_rows(rows);
      }
      const vareff::MLP model = vareff::MLP::train_new(train_mlp, train_table);
      model.save(train_out);
      std::cout << "trained on " << train_table.n_rows() << " rows; epoch MSE "
                << model.loss_trace().front() << " -> " << model.loss_trace().back()
                << "; model saved to " << train_out << '\n';
      return 0;
    }

    if (*analyze) {
      AnalysisConfig config;
      if (!config_path.empty()) config = load_config_file(config_path);
      if (opt_data->count()) config.data = an_data;
      if (opt_target->count()) config.target = an_target;
      if (opt_seed->count()) config.seed = an_seed;
      if (opt_rounds->count()) config.permutation_rounds = an_rounds;
      if (opt_bins->count()) config.ale_bins = an_bins;
      if (opt_lag->count()) config.mk_lag = an_lag;
      if (opt_alpha->count()) config.alpha = an_alpha;
      if (opt_boot->count()) config.n_boot = an_boot;
      if (opt_sample->count()) config.sample_size = an_sample;
      if (opt_out->count()) config.out_dir = an_out;
      if (opt_gen_rows->count()) config.generator_rows = an_gen_rows;
      if (opt_frac->count()) config.train_fraction = an_train_frac;
      if (opt_conf->count()) config.confidence = an_confidence;
      if (opt_model_file->count()) {
        config.model.kind = ModelSpec::Kind::model_file;
        config.model.model_file = an_model_file;
      } else if (opt_model_cmd->count()) {
        config.model.kind = ModelSpec::Kind::external_command;
        config.model.command = an_model_cmd;
      }
      if (opt_hidden->count()) config.model.mlp.layer_widths = widths_from_hidden(an_hidden);
      if (opt_dropout->count()) config.model.mlp.dropout_rate = an_dropout;
      if (opt_maxnorm->count()) {
        if (an_max_norm <= 0.0)
          config.model.mlp.max_norm = std::nullopt;
        else
          config.model.mlp.max_norm = an_max_norm;
      }
      if (opt_l2->count()) config.model.mlp.l2_lambda = an_l2;
      if (opt_epochs->count()) config.model.mlp.epochs = an_epochs;
      if (opt_batch->count()) config.model.mlp.batch_size = an_batch;
      if (opt_lr->count()) config.model.mlp.adam.step_size = an_lr;
      if (an_no_plots) config.write_plots = false;

      const vareff::FullReport report = vareff::run_analysis(config);
      std::cout << render_report_text(report) << "\nreport written to "
                << (config.out_dir / "report.json").string() << '\n';
      return 0;
    }

    if (*report_cmd) {
      const vareff::FullReport report = vareff::load_report_file(report_path);
      std::cout << render_report_text(report);
      if (!report_plots_dir.empty()) {
        const auto files = emit_plots(report, report_plots_dir);
        std::cout << "\nwrote " << files.size() << " files to " << report_plots_dir << '\n';
      }
      return 0;
    }
  } catch (const vareff::Error& e) {
    print_error_json(vareff::errc_name(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error_json("internal_error", e.what());
    return 1;
  }
  return 0;
}
