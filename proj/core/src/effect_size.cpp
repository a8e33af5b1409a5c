#include "vareff/effect_size.hpp"

#include <cmath>

#include "vareff/error.hpp"
#include "vareff/stats.hpp"

namespace vareff {

namespace {

constexpr double kDegenerateR2 = 1.0 - 1e-12;

void check_analysis_table(const DataTable& table) {
  if (!table.target_name()) fail(errc::missing_target, "table has no target column");
  if (!table.standardized())
    fail(errc::unstandardized_target, "effect sizes require a standardized table");
}

double full_r2(const Predictor& model, const DataTable& table) {
  const std::vector<double>& targets = table.column(table.target_index());
  const double base_mse = mse(model.predict(table), targets);
  const double r2 = r2_from_mse(base_mse, table);
  if (r2 >= kDegenerateR2)
    fail(errc::degenerate_model, "R^2 too close to 1; the f^2 denominator vanishes");
  return r2;
}

}  // namespace

const char* effect_band_name(EffectBand band) noexcept {
  switch (band) {
    case EffectBand::trivial: return "trivial";
    case EffectBand::small: return "small";
    case EffectBand::medium: return "medium";
    case EffectBand::large: return "large";
  }
  return "trivial";
}

EffectBand classify_effect(double f2) {
  if (!std::isfinite(f2)) fail(errc::non_finite, "f^2 is not finite");
  if (f2 < 0.02) return EffectBand::trivial;
  if (f2 < 0.15) return EffectBand::small;
  if (f2 < 0.35) return EffectBand::medium;
  return EffectBand::large;
}

double mse(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.size() != targets.size())
    fail(errc::length_mismatch, "prediction/target lengths differ");
  if (predictions.empty()) fail(errc::empty_input, "mse of empty vectors");
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double d = predictions[i] - targets[i];
    sum += d * d;
  }
  return sum / static_cast<double>(predictions.size());
}

double r2_from_mse(double mse_value, const DataTable& table) {
  if (!table.standardized())
    fail(errc::unstandardized_target, "R^2 = 1 - MSE requires a standardized target");
  if (!table.target_name()) fail(errc::missing_target, "table has no target column");
  return 1.0 - mse_value;
}

BaselineResult baseline_f2(const Predictor& model, const DataTable& table, std::size_t rounds,
                           const Rng& run_rng) {
  check_analysis_table(table);
  if (rounds < 1) fail(errc::invalid_config, "permutation rounds must be >= 1");

  BaselineResult result;
  result.r2_full = full_r2(model, table);
  result.negative_r2 = result.r2_full < 0.0;
  result.rounds = rounds;

  const std::vector<double>& targets = table.column(table.target_index());
  const std::vector<std::size_t> features = table.feature_indices();
  result.mse_rounds.reserve(rounds);
  for (std::size_t round = 0; round < rounds; ++round) {
    DataTable permuted = table;
    for (std::size_t c : features) {
      Rng stream = run_rng.child(kPermutationStream, round, c);
      permuted = permute_column(permuted, table.names()[c], stream);
    }
    result.mse_rounds.push_back(mse(model.predict(permuted), targets));
  }

  result.r2_base = 1.0 - mean(result.mse_rounds);
  const double denom = 1.0 - result.r2_full;
  result.f2_base = (result.r2_full - result.r2_base) / denom;
  result.f2_global = result.r2_full / denom;
  if (result.f2_base == 0.0)
    fail(errc::zero_baseline, "permuting all features does not change the loss; "
                              "the model is insensitive to its inputs");
  result.adjustment = result.f2_global / result.f2_base;
  return result;
}

F2Result permutation_f2(const Predictor& model, const DataTable& table, const std::string& var,
                        std::size_t rounds, const Rng& run_rng, const BaselineResult& baseline) {
  check_analysis_table(table);
  if (rounds < 1) fail(errc::invalid_config, "permutation rounds must be >= 1");
  const std::size_t column = table.column_index(var);
  if (table.target_name() && *table.target_name() == var)
    fail(errc::unknown_column, "'" + var + "' is the target, not a feature");

  F2Result result;
  result.variable = var;
  result.r2_full = full_r2(model, table);
  result.negative_r2 = result.r2_full < 0.0;
  result.rounds = rounds;

  const std::vector<double>& targets = table.column(table.target_index());
  result.mse_rounds.reserve(rounds);
  for (std::size_t round = 0; round < rounds; ++round) {
    Rng stream = run_rng.child(kPermutationStream, round, column);
    const DataTable permuted = permute_column(table, var, stream);
    result.mse_rounds.push_back(mse(model.predict(permuted), targets));
  }

  result.r2_permuted = 1.0 - mean(result.mse_rounds);
  const double denom = 1.0 - result.r2_full;
  result.f2_raw = (result.r2_full - result.r2_permuted) / denom;
  result.f2_adjusted = baseline.adjustment * result.f2_raw;
  result.band = classify_effect(result.f2_adjusted);
  result.mc_se = sample_sd(result.mse_rounds) / std::sqrt(static_cast<double>(rounds));
  return result;
}

}  // namespace vareff
