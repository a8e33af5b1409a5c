#include "vareff/mlp.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <fstream>
#include <sstream>

#include "json_detail.hpp"
#include "vareff/error.hpp"

namespace vareff {

namespace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMajorMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstRowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

ConstRowMajorMap weight_map(const DenseLayer& layer) {
  return ConstRowMajorMap(layer.weights.data(), layer.out, layer.in);
}

RowMajorMap weight_map(DenseLayer& layer) {
  return RowMajorMap(layer.weights.data(), layer.out, layer.in);
}

Eigen::Map<const Vector> bias_map(const DenseLayer& layer) {
  return Eigen::Map<const Vector>(layer.biases.data(), layer.out);
}

Eigen::Map<Vector> bias_map(DenseLayer& layer) {
  return Eigen::Map<Vector>(layer.biases.data(), layer.out);
}

/// Forward pass over a batch (samples are columns). Hidden layers apply
/// ReLU; optional inverted-dropout masks are multiplied onto the hidden
/// activations. Stores pre-activations and activations when requested.
struct ForwardPass {
  std::vector<Matrix> pre;   // z_l per layer
  std::vector<Matrix> act;   // a_l per layer (act[0] = input)
  Eigen::RowVectorXd output;
};

ForwardPass forward(const std::vector<DenseLayer>& layers, const Matrix& input,
                    const std::vector<Matrix>* dropout_masks) {
  ForwardPass pass;
  pass.act.reserve(layers.size() + 1);
  pass.pre.reserve(layers.size());
  pass.act.push_back(input);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    Matrix z = weight_map(layers[l]) * pass.act.back();
    z.colwise() += bias_map(layers[l]);
    if (l + 1 < layers.size()) {
      Matrix a = z.cwiseMax(0.0);
      if (dropout_masks) a = a.cwiseProduct((*dropout_masks)[l]);
      pass.pre.push_back(std::move(z));
      pass.act.push_back(std::move(a));
    } else {
      pass.output = z.row(0);
      pass.pre.push_back(std::move(z));
    }
  }
  return pass;
}

struct GradientBuffers {
  std::vector<Matrix> w;
  std::vector<Vector> b;

  explicit GradientBuffers(const std::vector<DenseLayer>& layers) {
    for (const DenseLayer& layer : layers) {
      w.emplace_back(Matrix::Zero(layer.out, layer.in));
      b.emplace_back(Vector::Zero(layer.out));
    }
  }
};

/// Backprop of batch MSE (mean over samples) plus the L2 penalty.
void backward(const std::vector<DenseLayer>& layers, const ForwardPass& pass,
              const Eigen::RowVectorXd& targets, const std::vector<Matrix>* dropout_masks,
              double l2_lambda, GradientBuffers& grads) {
  const double batch = static_cast<double>(targets.size());
  Matrix delta = (2.0 / batch) * (pass.output - targets);  // 1 x batch

  for (std::size_t l = layers.size(); l-- > 0;) {
    grads.w[l].noalias() = delta * pass.act[l].transpose();
    grads.b[l] = delta.rowwise().sum();
    if (l2_lambda > 0.0) {
      grads.w[l] += 2.0 * l2_lambda * weight_map(layers[l]);
      grads.b[l] += 2.0 * l2_lambda * bias_map(layers[l]);
    }
    if (l == 0) break;
    Matrix upstream = weight_map(layers[l]).transpose() * delta;
    if (dropout_masks) upstream = upstream.cwiseProduct((*dropout_masks)[l - 1]);
    delta = upstream.cwiseProduct(
        (pass.pre[l - 1].array() > 0.0).cast<double>().matrix());
  }
}

void apply_max_norm(std::vector<DenseLayer>& layers, double bound) {
  for (DenseLayer& layer : layers) {
    RowMajorMap w = weight_map(layer);
    for (int row = 0; row < w.rows(); ++row) {
      const double norm = w.row(row).norm();
      if (norm > bound) w.row(row) *= bound / norm;
    }
  }
}

Matrix features_as_columns(const DataTable& table) {
  const std::vector<std::size_t> features = table.feature_indices();
  Matrix x(features.size(), table.n_rows());
  for (std::size_t c = 0; c < features.size(); ++c) {
    const std::vector<double>& column = table.column(features[c]);
    for (std::size_t r = 0; r < column.size(); ++r) x(static_cast<int>(c), static_cast<int>(r)) = column[r];
  }
  return x;
}

Matrix rows_as_columns(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) fail(errc::empty_input, "empty batch");
  Matrix x(rows.front().size(), rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.front().size())
      fail(errc::shape_mismatch, "ragged batch rows");
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      x(static_cast<int>(c), static_cast<int>(r)) = rows[r][c];
  }
  return x;
}

double l2_penalty(const std::vector<DenseLayer>& layers, double l2_lambda) {
  if (l2_lambda <= 0.0) return 0.0;
  double sum = 0.0;
  for (const DenseLayer& layer : layers) {
    for (double w : layer.weights) sum += w * w;
    for (double b : layer.biases) sum += b * b;
  }
  return l2_lambda * sum;
}

}  // namespace

void validate(const MLPConfig& config) {
  if (config.layer_widths.empty()) fail(errc::invalid_config, "layer_widths must be nonempty");
  for (int w : config.layer_widths)
    if (w < 1) fail(errc::invalid_config, "layer widths must be >= 1");
  if (config.layer_widths.back() != 1)
    fail(errc::invalid_config, "final layer width must be 1 (scalar regression)");
  if (config.epochs < 1) fail(errc::invalid_config, "epochs must be >= 1");
  if (config.batch_size < 1) fail(errc::invalid_config, "batch_size must be >= 1");
  if (!(config.dropout_rate >= 0.0 && config.dropout_rate < 1.0))
    fail(errc::invalid_config, "dropout_rate must be in [0,1)");
  if (config.l2_lambda < 0.0) fail(errc::invalid_config, "l2_lambda must be >= 0");
  if (config.max_norm && !(*config.max_norm > 0.0))
    fail(errc::invalid_config, "max_norm must be positive");
  if (!(config.adam.step_size > 0.0) || !(config.adam.epsilon > 0.0) ||
      !(config.adam.beta1 >= 0.0 && config.adam.beta1 < 1.0) ||
      !(config.adam.beta2 >= 0.0 && config.adam.beta2 < 1.0))
    fail(errc::invalid_config, "invalid Adam parameters");
}

MLP MLP::init(const MLPConfig& config, std::vector<std::string> feature_names, Rng& rng) {
  validate(config);
  if (feature_names.empty()) fail(errc::invalid_config, "at least one feature required");

  MLP model;
  model.config_ = config;
  model.feature_names_ = std::move(feature_names);

  int fan_in = static_cast<int>(model.feature_names_.size());
  for (std::size_t l = 0; l < config.layer_widths.size(); ++l) {
    DenseLayer layer;
    layer.in = fan_in;
    layer.out = config.layer_widths[l];
    layer.weights.resize(static_cast<std::size_t>(layer.in) * layer.out);
    layer.biases.assign(layer.out, 0.0);
    const bool is_output = l + 1 == config.layer_widths.size();
    if (is_output) {
      const double limit = std::sqrt(6.0 / (layer.in + layer.out));
      for (double& w : layer.weights) w = rng.uniform(-limit, limit);
    } else {
      const double sd = std::sqrt(2.0 / layer.in);
      for (double& w : layer.weights) w = sd * rng.normal();
    }
    model.layers_.push_back(std::move(layer));
    fan_in = config.layer_widths[l];
  }
  return model;
}

MLP MLP::train_new(const MLPConfig& config, const DataTable& table) {
  Rng base(config.seed);
  Rng init_rng = base.child(1);
  Rng train_rng = base.child(2);
  MLP model = init(config, table.feature_names(), init_rng);
  model.train(table, train_rng);
  return model;
}

void MLP::train(const DataTable& table, Rng& rng) {
  validate(config_);
  if (!table.target_name()) fail(errc::missing_target, "training table has no target column");
  if (!table.standardized())
    fail(errc::unstandardized_target, "training table must be standardized");
  if (table.feature_names() != feature_names_)
    fail(errc::schema_mismatch, "training table does not match the model's feature schema");

  const Matrix x_all = features_as_columns(table);
  const std::vector<double>& y_all = table.column(table.target_index());
  const std::size_t n = table.n_rows();
  const std::size_t batch_size = static_cast<std::size_t>(config_.batch_size);

  // Adam state
  std::vector<Matrix> m_w, v_w;
  std::vector<Vector> m_b, v_b;
  for (const DenseLayer& layer : layers_) {
    m_w.emplace_back(Matrix::Zero(layer.out, layer.in));
    v_w.emplace_back(Matrix::Zero(layer.out, layer.in));
    m_b.emplace_back(Vector::Zero(layer.out));
    v_b.emplace_back(Vector::Zero(layer.out));
  }
  long long t = 0;
  const AdamParams& adam = config_.adam;
  const double p_drop = config_.dropout_rate;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  GradientBuffers grads(layers_);
  for (int epoch = 0; epoch < config_.epochs; ++epoch) {
    fisher_yates(order, rng);
    double epoch_sse = 0.0;
    for (std::size_t start = 0; start < n; start += batch_size) {
      const std::size_t b = std::min(batch_size, n - start);
      Matrix xb(x_all.rows(), b);
      Eigen::RowVectorXd yb(b);
      for (std::size_t i = 0; i < b; ++i) {
        xb.col(static_cast<int>(i)) = x_all.col(static_cast<int>(order[start + i]));
        yb(static_cast<int>(i)) = y_all[order[start + i]];
      }

      std::vector<Matrix> masks;
      const std::vector<Matrix>* masks_ptr = nullptr;
      if (p_drop > 0.0) {
        const double scale = 1.0 / (1.0 - p_drop);
        for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
          Matrix mask(layers_[l].out, b);
          for (int col = 0; col < mask.cols(); ++col)
            for (int row = 0; row < mask.rows(); ++row)
              mask(row, col) = rng.unit() < p_drop ? 0.0 : scale;
          masks.push_back(std::move(mask));
        }
        masks_ptr = &masks;
      }

      const ForwardPass pass = forward(layers_, xb, masks_ptr);
      const double batch_mse = (pass.output - yb).squaredNorm() / static_cast<double>(b);
      if (!std::isfinite(batch_mse)) fail(errc::non_finite_loss, "training loss diverged");
      epoch_sse += batch_mse * static_cast<double>(b);

      backward(layers_, pass, yb, masks_ptr, config_.l2_lambda, grads);

      ++t;
      const double bc1 = 1.0 - std::pow(adam.beta1, static_cast<double>(t));
      const double bc2 = 1.0 - std::pow(adam.beta2, static_cast<double>(t));
      for (std::size_t l = 0; l < layers_.size(); ++l) {
        m_w[l] = adam.beta1 * m_w[l] + (1.0 - adam.beta1) * grads.w[l];
        v_w[l] = adam.beta2 * v_w[l] + (1.0 - adam.beta2) * grads.w[l].cwiseProduct(grads.w[l]);
        m_b[l] = adam.beta1 * m_b[l] + (1.0 - adam.beta1) * grads.b[l];
        v_b[l] = adam.beta2 * v_b[l] + (1.0 - adam.beta2) * grads.b[l].cwiseProduct(grads.b[l]);

        RowMajorMap w = weight_map(layers_[l]);
        w.array() -= adam.step_size * (m_w[l].array() / bc1) /
                     ((v_w[l].array() / bc2).sqrt() + adam.epsilon);
        Eigen::Map<Vector> bias = bias_map(layers_[l]);
        bias.array() -= adam.step_size * (m_b[l].array() / bc1) /
                        ((v_b[l].array() / bc2).sqrt() + adam.epsilon);
      }
      if (config_.max_norm) apply_max_norm(layers_, *config_.max_norm);
    }
    loss_trace_.push_back(epoch_sse / static_cast<double>(n));
  }
}

std::vector<double> MLP::predict(const DataTable& table) const {
  check_schema(table);
  if (table.feature_indices().size() != static_cast<std::size_t>(layers_.front().in))
    fail(errc::schema_mismatch, "feature count does not match the network input width");
  const Matrix x = features_as_columns(table);
  const ForwardPass pass = forward(layers_, x, nullptr);
  std::vector<double> out(pass.output.size());
  for (int i = 0; i < pass.output.size(); ++i) {
    if (!std::isfinite(pass.output(i))) fail(errc::non_finite, "non-finite prediction");
    out[static_cast<std::size_t>(i)] = pass.output(i);
  }
  return out;
}

double MLP::loss(const std::vector<std::vector<double>>& rows,
                 std::span<const double> targets) const {
  if (rows.size() != targets.size()) fail(errc::length_mismatch, "batch/target size mismatch");
  const Matrix x = rows_as_columns(rows);
  const ForwardPass pass = forward(layers_, x, nullptr);
  double sse = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double d = pass.output(static_cast<int>(i)) - targets[i];
    sse += d * d;
  }
  return sse / static_cast<double>(targets.size()) + l2_penalty(layers_, config_.l2_lambda);
}

MLPGradients MLP::gradients(const std::vector<std::vector<double>>& rows,
                            std::span<const double> targets) const {
  if (rows.size() != targets.size()) fail(errc::length_mismatch, "batch/target size mismatch");
  const Matrix x = rows_as_columns(rows);
  const ForwardPass pass = forward(layers_, x, nullptr);
  Eigen::RowVectorXd y(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) y(static_cast<int>(i)) = targets[i];

  GradientBuffers buffers(layers_);
  backward(layers_, pass, y, nullptr, config_.l2_lambda, buffers);

  MLPGradients out;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    std::vector<double> w(layers_[l].weights.size());
    RowMajorMap(w.data(), layers_[l].out, layers_[l].in) = buffers.w[l];
    out.weights.push_back(std::move(w));
    out.biases.emplace_back(buffers.b[l].data(), buffers.b[l].data() + buffers.b[l].size());
  }
  return out;
}

std::string MLP::to_json() const {
  detail::ordered_json doc;
  doc["format"] = "vareff-mlp";
  doc["schema_version"] = 1;
  detail::ordered_json cfg;
  cfg["layer_widths"] = config_.layer_widths;
  cfg["dropout_rate"] = config_.dropout_rate;
  if (config_.max_norm)
    cfg["max_norm"] = *config_.max_norm;
  else
    cfg["max_norm"] = nullptr;
  cfg["l2_lambda"] = config_.l2_lambda;
  cfg["epochs"] = config_.epochs;
  cfg["batch_size"] = config_.batch_size;
  cfg["adam"] = {{"step_size", config_.adam.step_size},
                 {"beta1", config_.adam.beta1},
                 {"beta2", config_.adam.beta2},
                 {"epsilon", config_.adam.epsilon}};
  cfg["seed"] = config_.seed;
  doc["config"] = std::move(cfg);
  doc["features"] = feature_names_;
  detail::ordered_json layers = detail::ordered_json::array();
  for (const DenseLayer& layer : layers_) {
    detail::ordered_json jl;
    jl["in"] = layer.in;
    jl["out"] = layer.out;
    jl["weights"] = layer.weights;
    jl["biases"] = layer.biases;
    layers.push_back(std::move(jl));
  }
  doc["layers"] = std::move(layers);
  doc["loss_trace"] = loss_trace_;
  return detail::dump_json(doc);
}

MLP MLP::from_json(const std::string& text) {
  const detail::ordered_json doc = detail::parse_json(text);
  try {
    if (doc.at("format").get<std::string>() != "vareff-mlp")
      fail(errc::parse_error, "not a vareff model document");
    if (doc.at("schema_version").get<int>() != 1)
      fail(errc::parse_error, "unsupported model schema version");

    MLP model;
    const auto& cfg = doc.at("config");
    model.config_.layer_widths = cfg.at("layer_widths").get<std::vector<int>>();
    model.config_.dropout_rate = cfg.at("dropout_rate").get<double>();
    if (cfg.at("max_norm").is_null())
      model.config_.max_norm = std::nullopt;
    else
      model.config_.max_norm = cfg.at("max_norm").get<double>();
    model.config_.l2_lambda = cfg.at("l2_lambda").get<double>();
    model.config_.epochs = cfg.at("epochs").get<int>();
    model.config_.batch_size = cfg.at("batch_size").get<int>();
    model.config_.adam.step_size = cfg.at("adam").at("step_size").get<double>();
    model.config_.adam.beta1 = cfg.at("adam").at("beta1").get<double>();
    model.config_.adam.beta2 = cfg.at("adam").at("beta2").get<double>();
    model.config_.adam.epsilon = cfg.at("adam").at("epsilon").get<double>();
    model.config_.seed = cfg.at("seed").get<std::uint64_t>();
    model.feature_names_ = doc.at("features").get<std::vector<std::string>>();
    for (const auto& jl : doc.at("layers")) {
      DenseLayer layer;
      layer.in = jl.at("in").get<int>();
      layer.out = jl.at("out").get<int>();
      layer.weights = jl.at("weights").get<std::vector<double>>();
      layer.biases = jl.at("biases").get<std::vector<double>>();
      if (layer.weights.size() != static_cast<std::size_t>(layer.in) * layer.out ||
          layer.biases.size() != static_cast<std::size_t>(layer.out))
        fail(errc::parse_error, "layer dimensions do not match array sizes");
      model.layers_.push_back(std::move(layer));
    }
    model.loss_trace_ = doc.at("loss_trace").get<std::vector<double>>();
    if (model.layers_.empty()) fail(errc::parse_error, "model has no layers");
    return model;
  } catch (const detail::ordered_json::exception& e) {
    fail(errc::parse_error, std::string("malformed model document: ") + e.what());
  }
}

void MLP::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot write '" + path.string() + "'");
  out << to_json() << '\n';
  if (!out) fail(errc::io_error, "short write to '" + path.string() + "'");
}

MLP MLP::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(errc::file_not_found, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

}  // namespace vareff
