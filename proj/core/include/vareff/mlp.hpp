#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vareff/predictor.hpp"
#include "vareff/rng.hpp"

namespace vareff {

struct AdamParams {
  double step_size = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  bool operator==(const AdamParams&) const = default;
};

/// Feedforward regressor hyperparameters. Hidden layers use ReLU with
/// He-normal initialization; the final layer is linear with Glorot-uniform
/// initialization. The last width must be 1 (scalar regression).
struct MLPConfig {
  std::vector<int> layer_widths{50, 50, 50, 1};
  double dropout_rate = 0.001;
  std::optional<double> max_norm = 5.0;
  double l2_lambda = 0.0;
  int epochs = 50;
  int batch_size = 128;
  AdamParams adam{};
  std::uint64_t seed = 0;

  bool operator==(const MLPConfig&) const = default;
};

/// One dense layer; weights are row-major with one row of incoming weights
/// per output unit.
struct DenseLayer {
  int in = 0;
  int out = 0;
  std::vector<double> weights;  // out x in, row-major
  std::vector<double> biases;   // out

  bool operator==(const DenseLayer&) const = default;
};

/// Parameter gradients, mirroring the layer layout. Exposed so gradient
/// correctness can be checked against finite differences.
struct MLPGradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

class MLP final : public Predictor {
 public:
  /// Freshly initialized (untrained) network: hidden weights are
  /// Normal(0, sqrt(2/fan_in)), output weights Uniform(+-sqrt(6/(fan_in+fan_out))),
  /// all biases zero.
  static MLP init(const MLPConfig& config, std::vector<std::string> feature_names, Rng& rng);

  /// Convenience: init with a stream derived from config.seed, then train.
  static MLP train_new(const MLPConfig& config, const DataTable& table);

  /// Minibatch Adam on MSE over the feature/target columns of a standardized
  /// table. Randomness (batch order, dropout) comes from `rng`. Records the
  /// mean training MSE per epoch. Can be called repeatedly to continue
  /// training.
  void train(const DataTable& table, Rng& rng);

  std::vector<double> predict(const DataTable& table) const override;
  std::vector<std::string> expected_features() const override { return feature_names_; }

  const MLPConfig& config() const noexcept { return config_; }
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::vector<DenseLayer>& mutable_layers() noexcept { return layers_; }
  const std::vector<double>& loss_trace() const noexcept { return loss_trace_; }

  /// Data loss (MSE) plus the L2 penalty on a feature-major batch;
  /// dropout is off. Rows of `features` are samples.
  double loss(const std::vector<std::vector<double>>& rows, std::span<const double> targets) const;

  /// Backpropagated gradients of loss() on the same batch.
  MLPGradients gradients(const std::vector<std::vector<double>>& rows,
                         std::span<const double> targets) const;

  void save(const std::filesystem::path& path) const;
  static MLP load(const std::filesystem::path& path);

  std::string to_json() const;
  static MLP from_json(const std::string& text);

  bool operator==(const MLP& other) const {
    return config_ == other.config_ && feature_names_ == other.feature_names_ &&
           layers_ == other.layers_ && loss_trace_ == other.loss_trace_;
  }

 private:
  MLP() = default;

  MLPConfig config_;
  std::vector<std::string> feature_names_;
  std::vector<DenseLayer> layers_;
  std::vector<double> loss_trace_;
};

void validate(const MLPConfig& config);

}  // namespace vareff
