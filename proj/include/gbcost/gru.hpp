#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gbcost/regress.hpp"

namespace gbcost {

/// Gate order used throughout the parameter layout.
enum class Gate : std::uint8_t { z = 0, r = 1, n = 2 };

struct GruConfig {
  std::size_t input_dim = 6;
  std::size_t hidden = 128;
  std::size_t sequence_len = 10;
  std::uint64_t seed = 0;
};

/// 3*(I*H + H*H + 2*H) + H + 1 (double-bias GRU plus a dense output).
std::size_t param_count(const GruConfig& cfg);

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Parameter storage. The fixed alignment keeps Eigen's vectorized reductions
/// over parameter views in the same order on every run.
using ParamVector = std::vector<double, Eigen::aligned_allocator<double>>;

/// One input sequence, T rows of input_dim columns.
using Sequence = RowMatrix;

/// Flat parameter vector with typed views. Layout (all matrices row-major):
///   W_z W_r W_n   (H x I each)
///   U_z U_r U_n   (H x H each)
///   bx_z bx_r bx_n bh_z bh_r bh_n   (H each)
///   w_out (H), b_out (1)
class GruParams {
 public:
  GruParams() = default;
  GruParams(std::size_t input_dim, std::size_t hidden);

  std::size_t input_dim() const noexcept { return input_; }
  std::size_t hidden() const noexcept { return hidden_; }
  std::size_t size() const noexcept { return flat_.size(); }

  ParamVector& flat() noexcept { return flat_; }
  const ParamVector& flat() const noexcept { return flat_; }

  std::size_t offset_w() const noexcept { return 0; }
  std::size_t offset_u() const noexcept { return 3 * hidden_ * input_; }
  std::size_t offset_bx() const noexcept { return offset_u() + 3 * hidden_ * hidden_; }
  std::size_t offset_bh() const noexcept { return offset_bx() + 3 * hidden_; }
  std::size_t offset_wout() const noexcept { return offset_bh() + 3 * hidden_; }
  std::size_t offset_bout() const noexcept { return offset_wout() + hidden_; }

  /// Stacked [W_z; W_r; W_n], 3H x I.
  Eigen::Map<const RowMatrix> w() const;
  Eigen::Map<RowMatrix> w();
  /// Stacked [U_z; U_r; U_n], 3H x H.
  Eigen::Map<const RowMatrix> u() const;
  Eigen::Map<RowMatrix> u();
  Eigen::Map<const Eigen::VectorXd> bx() const;
  Eigen::Map<const Eigen::VectorXd> bh() const;
  Eigen::Map<const Eigen::VectorXd> w_out() const;
  double b_out() const { return flat_.back(); }
  double& b_out() { return flat_.back(); }

  double w_at(Gate g, std::size_t row, std::size_t col) const;
  double u_at(Gate g, std::size_t row, std::size_t col) const;
  double bx_at(Gate g, std::size_t row) const;
  double bh_at(Gate g, std::size_t row) const;

 private:
  std::size_t input_ = 0;
  std::size_t hidden_ = 0;
  ParamVector flat_;
};

/// Uniform(-1/sqrt(H), 1/sqrt(H)) weights and biases, b_out = 0.
GruParams init_params(const GruConfig& cfg);

/// Scalar per-sample forward pass. Throws DimensionError on a column mismatch.
double forward_reference(const GruParams& p, const Sequence& x);

/// Gradient of (1/B) sum (forward(x_b) - y_b)^2, plain loops, one sample at a
/// time. Returns the loss; `grad` is resized to the flat parameter length.
double loss_grad_reference(const GruParams& p, std::span<const Sequence> xs,
                           std::span<const double> ys, std::vector<double>& grad);

/// Batched Eigen kernel with the same contract. Sequences of different lengths
/// are masked so each sample's state stops at its own last step. Samples are
/// processed in fixed chunks of `chunk` that may run in parallel; chunk
/// results are summed in chunk order.
double loss_grad_batched(const GruParams& p, std::span<const Sequence> xs,
                         std::span<const double> ys, std::vector<double>& grad,
                         std::size_t chunk = 32);

/// Batched inference.
std::vector<double> predict_batched(const GruParams& p, std::span<const Sequence> xs);

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 64;
  std::size_t epochs = 20;
  double grad_clip_norm = 1.0;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;
  /// Fit (y - mean) / std of the training targets and fold the scale back
  /// into w_out and b_out afterwards. Losses are reported in target units.
  bool standardize_targets = false;
  /// Learning rate multiplier applied after every epoch.
  double lr_decay = 1.0;
  /// Decoupled weight decay (AdamW) on all weights except the biases.
  double weight_decay = 0.0;
};

struct SequenceDataset {
  std::size_t input_dim = 0;
  std::vector<Sequence> inputs;
  std::vector<double> targets;

  std::size_t size() const noexcept { return targets.size(); }
  SequenceDataset subset(std::span<const std::size_t> rows) const;
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double validation_loss = 0.0;
};

struct TrainResult {
  GruParams params;
  std::vector<EpochLog> curve;
  std::size_t best_epoch = 0;
  double best_validation_loss = 0.0;
};

/// Adam with global-norm clipping; returns the parameters of the epoch with
/// the lowest validation loss. b_out starts at the mean training target.
/// Throws DivergenceError on a non-finite loss and InvalidArgument on bad config.
TrainResult train(const SequenceDataset& data, const GruConfig& gru_cfg, const TrainConfig& train_cfg);

/// Metrics with the test-mean R^2 convention. Throws FeatureMismatch when the
/// dataset's input width differs from the model's.
EvalMetrics evaluate_net(const GruParams& p, const SequenceDataset& data);

struct CheckpointMeta {
  GruConfig config;
  TrainConfig train;
  std::string input_layout = "lead exponents then trailing exponents per generator, generators by increasing lead monomial";
  double input_scale = 1.0;
  std::string dist;
};

/// Header line of JSON followed by the flat little-endian float64 parameters.
void save_checkpoint(const std::string& path, const GruParams& p, const CheckpointMeta& meta);
GruParams load_checkpoint(const std::string& path, CheckpointMeta* meta = nullptr);

}  // namespace gbcost
