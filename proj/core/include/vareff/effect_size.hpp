#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vareff/data.hpp"
#include "vareff/predictor.hpp"
#include "vareff/rng.hpp"

namespace vareff {

/// Conventional effect-size bands for f^2: trivial < 0.02 <= small < 0.15 <=
/// medium < 0.35 <= large.
enum class EffectBand { trivial, small, medium, large };

const char* effect_band_name(EffectBand band) noexcept;

/// Total, piecewise-constant, monotone banding of a finite f^2; negative
/// values fall into the trivial band (callers flag them separately).
EffectBand classify_effect(double f2);

/// Mean squared error of predictions against targets.
double mse(std::span<const double> predictions, std::span<const double> targets);

/// R^2 = 1 - MSE; valid only when the target column has unit population
/// variance, so the table's standardization state is required. May be
/// negative for models worse than the mean predictor.
double r2_from_mse(double mse_value, const DataTable& table);

/// No-signal floor: performance destruction when every feature column is
/// permuted, and the adjustment factor a = f^2 / f_base^2 that rescales raw
/// permutation effects onto the global-effect scale.
struct BaselineResult {
  double r2_full = 0.0;     // R^2 of the unpermuted model on this table
  double r2_base = 0.0;     // mean over rounds of 1 - MSE with all columns permuted
  double f2_base = 0.0;     // (R^2 - R_base^2) / (1 - R^2)
  double f2_global = 0.0;   // R^2 / (1 - R^2)
  double adjustment = 0.0;  // f2_global / f2_base
  std::size_t rounds = 0;
  std::vector<double> mse_rounds;
  bool negative_r2 = false;

  bool operator==(const BaselineResult&) const = default;
};

/// Permutation effect size of one variable.
struct F2Result {
  std::string variable;
  double r2_full = 0.0;
  double r2_permuted = 0.0;  // mean over rounds of 1 - MSE with `variable` permuted
  double f2_raw = 0.0;       // (R^2 - R_V^2) / (1 - R^2)
  double f2_adjusted = 0.0;  // adjustment * f2_raw
  EffectBand band = EffectBand::trivial;  // assigned on f2_adjusted
  std::size_t rounds = 0;
  std::vector<double> mse_rounds;
  double mc_se = 0.0;  // sd(mse_rounds) / sqrt(rounds)
  bool negative_r2 = false;

  bool operator==(const F2Result&) const = default;
};

/// Permutation streams are keyed as run_rng.child(tag, round, column), so a
/// baseline round permutes column c with exactly the stream a single-variable
/// round for c uses. Runs are reproducible from one seed, rounds are
/// independent, and on a one-feature table the baseline and variable rounds
/// coincide, which makes a * f_V^2 equal f^2 exactly.
constexpr std::uint64_t kPermutationStream = 0x70;

BaselineResult baseline_f2(const Predictor& model, const DataTable& table, std::size_t rounds,
                           const Rng& run_rng);

F2Result permutation_f2(const Predictor& model, const DataTable& table, const std::string& var,
                        std::size_t rounds, const Rng& run_rng, const BaselineResult& baseline);

}  // namespace vareff
