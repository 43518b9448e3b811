#include <cmath>
#include <cstring>
#include <limits>
#include <fstream>
#include <numeric>

#include "json.hpp"

#include "gbcost/errors.hpp"
#include "gbcost/gru.hpp"
#include "gbcost/rng.hpp"

namespace gbcost {

namespace {

constexpr int kCheckpointVersion = 1;

double mse(std::span<const double> pred, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += (pred[i] - y[i]) * (pred[i] - y[i]);
  return y.empty() ? 0.0 : s / static_cast<double>(y.size());
}

}  // namespace

SequenceDataset SequenceDataset::subset(std::span<const std::size_t> rows) const {
  SequenceDataset out;
  out.input_dim = input_dim;
  out.inputs.reserve(rows.size());
  out.targets.reserve(rows.size());
  for (std::size_t r : rows) {
    out.inputs.push_back(inputs[r]);
    out.targets.push_back(targets[r]);
  }
  return out;
}

TrainResult train(const SequenceDataset& data, const GruConfig& gru_cfg, const TrainConfig& cfg) {
  if (data.size() == 0) throw InvalidArgument("training on an empty dataset");
  if (gru_cfg.input_dim != data.input_dim)
    throw FeatureMismatch("dataset input width differs from the configured input_dim");
  if (!(cfg.learning_rate > 0.0) || cfg.batch_size == 0 || cfg.epochs == 0 || !(cfg.grad_clip_norm > 0.0) ||
      !(cfg.validation_fraction > 0.0 && cfg.validation_fraction <= 0.5) || !(cfg.lr_decay > 0.0 && cfg.lr_decay <= 1.0) ||
      !(cfg.weight_decay >= 0.0))
    throw InvalidArgument("invalid training configuration");

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng split_rng(mix_seed(cfg.seed, 0));
  split_rng.shuffle(std::span<std::size_t>(order));
  const auto n_val = static_cast<std::size_t>(std::floor(cfg.validation_fraction * static_cast<double>(data.size())));
  std::vector<std::size_t> train_idx(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
  const std::vector<std::size_t> val_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  if (train_idx.empty()) throw InvalidArgument("validation split leaves no training samples");
  const SequenceDataset val = data.subset(val_idx);

  GruParams params = init_params(gru_cfg);
  double target_mean = 0.0;
  for (std::size_t i : train_idx) target_mean += data.targets[i];
  target_mean /= static_cast<double>(train_idx.size());
  double target_std = 1.0;
  if (cfg.standardize_targets) {
    double ss = 0.0;
    for (std::size_t i : train_idx) ss += (data.targets[i] - target_mean) * (data.targets[i] - target_mean);
    const double sd = std::sqrt(ss / static_cast<double>(train_idx.size()));
    if (sd > 0.0) target_std = sd;
  }
  const double shift = cfg.standardize_targets ? target_mean : 0.0;
  const double loss_unit = target_std * target_std;
  params.b_out() = cfg.standardize_targets ? 0.0 : target_mean;
  std::vector<double> fit_targets(data.targets.size());
  for (std::size_t i = 0; i < fit_targets.size(); ++i) fit_targets[i] = (data.targets[i] - shift) / target_std;
  // Maps the model fitted on scaled targets back to target units.
  const auto unscaled = [&](GruParams q) {
    ParamVector& f = q.flat();
    for (std::size_t k = q.offset_wout(); k < q.offset_bout(); ++k) f[k] *= target_std;
    q.b_out() = q.b_out() * target_std + shift;
    return q;
  };

  const std::size_t np = params.size();
  std::vector<double> m(np, 0.0), v(np, 0.0), grad;
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  std::uint64_t step = 0;

  TrainResult result;
  result.params = unscaled(params);
  result.best_validation_loss = std::numeric_limits<double>::infinity();

  std::vector<Sequence> bx;
  std::vector<double> by;
  // Biases are exempt from weight decay.
  std::vector<double> decay(np, cfg.weight_decay);
  std::fill(decay.begin() + static_cast<std::ptrdiff_t>(params.offset_bx()),
            decay.begin() + static_cast<std::ptrdiff_t>(params.offset_wout()), 0.0);
  decay.back() = 0.0;
  double lr = cfg.learning_rate;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch, lr *= cfg.lr_decay) {
    Rng rng(mix_seed(cfg.seed, epoch));
    rng.shuffle(std::span<std::size_t>(train_idx));
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t lo = 0; lo < train_idx.size(); lo += cfg.batch_size) {
      const std::size_t hi = std::min(train_idx.size(), lo + cfg.batch_size);
      bx.clear();
      by.clear();
      for (std::size_t k = lo; k < hi; ++k) {
        bx.push_back(data.inputs[train_idx[k]]);
        by.push_back(fit_targets[train_idx[k]]);
      }
      const double loss = loss_grad_batched(params, bx, by, grad);
      if (!std::isfinite(loss))
        throw DivergenceError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                              std::to_string(batches));
      double norm = 0.0;
      for (double g : grad) norm += g * g;
      norm = std::sqrt(norm);
      const double clip = norm > cfg.grad_clip_norm ? cfg.grad_clip_norm / norm : 1.0;

      ++step;
      const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      ParamVector& f = params.flat();
      for (std::size_t k = 0; k < np; ++k) {
        const double g = grad[k] * clip;
        m[k] = kBeta1 * m[k] + (1.0 - kBeta1) * g;
        v[k] = kBeta2 * v[k] + (1.0 - kBeta2) * g * g;
        f[k] -= lr * ((m[k] / c1) / (std::sqrt(v[k] / c2) + kEps) + decay[k] * f[k]);
      }
      loss_sum += loss * loss_unit;
      ++batches;
    }

    EpochLog log;
    log.epoch = epoch;
    log.train_loss = loss_sum / static_cast<double>(batches);
    log.validation_loss =
        val.size() == 0 ? log.train_loss : mse(predict_batched(unscaled(params), val.inputs), val.targets);
    if (!std::isfinite(log.validation_loss))
      throw DivergenceError("non-finite validation loss at epoch " + std::to_string(epoch));
    result.curve.push_back(log);
    if (log.validation_loss < result.best_validation_loss) {
      result.best_validation_loss = log.validation_loss;
      result.best_epoch = epoch;
      result.params = unscaled(params);
    }
  }
  return result;
}

EvalMetrics evaluate_net(const GruParams& p, const SequenceDataset& data) {
  if (data.input_dim != p.input_dim())
    throw FeatureMismatch("model expects " + std::to_string(p.input_dim()) + " inputs per step, dataset has " +
                          std::to_string(data.input_dim));
  const std::vector<double> pred = predict_batched(p, data.inputs);
  return compute_metrics(pred, data.targets);
}

void save_checkpoint(const std::string& path, const GruParams& p, const CheckpointMeta& meta) {
  nlohmann::ordered_json h;
  h["format"] = "gbcost-gru";
  h["version"] = kCheckpointVersion;
  h["input_dim"] = meta.config.input_dim;
  h["hidden"] = meta.config.hidden;
  h["sequence_len"] = meta.config.sequence_len;
  h["seed"] = meta.config.seed;
  h["train"] = {{"learning_rate", meta.train.learning_rate},
                {"batch_size", meta.train.batch_size},
                {"epochs", meta.train.epochs},
                {"grad_clip_norm", meta.train.grad_clip_norm},
                {"validation_fraction", meta.train.validation_fraction},
                {"seed", meta.train.seed},
                {"standardize_targets", meta.train.standardize_targets},
                {"lr_decay", meta.train.lr_decay},
                {"weight_decay", meta.train.weight_decay}};
  h["input_layout"] = meta.input_layout;
  h["input_scale"] = meta.input_scale;
  h["dist"] = meta.dist;
  h["param_order"] = "W_z W_r W_n U_z U_r U_n bx_z bx_r bx_n bh_z bh_r bh_n w_out b_out (row-major)";
  h["param_count"] = p.size();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path);
  out << h.dump() << '\n';
  static_assert(sizeof(double) == 8);
  out.write(reinterpret_cast<const char*>(p.flat().data()), static_cast<std::streamsize>(p.size() * sizeof(double)));
  if (!out) throw DataError("failed writing checkpoint " + path);
}

GruParams load_checkpoint(const std::string& path, CheckpointMeta* meta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read checkpoint " + path);
  std::string line;
  std::getline(in, line);
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed checkpoint header: " + std::string(e.what()));
  }
  if (h.value("format", "") != "gbcost-gru" || h.value("version", 0) != kCheckpointVersion)
    throw DataError("unsupported checkpoint format in " + path);
  GruParams p(h.at("input_dim").get<std::size_t>(), h.at("hidden").get<std::size_t>());
  if (h.at("param_count").get<std::size_t>() != p.size()) throw DataError("checkpoint parameter count mismatch");
  in.read(reinterpret_cast<char*>(p.flat().data()), static_cast<std::streamsize>(p.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(p.size() * sizeof(double)))
    throw DataError("truncated checkpoint " + path);
  if (meta) {
    meta->config = {p.input_dim(), p.hidden(), h.at("sequence_len").get<std::size_t>(), h.at("seed").get<std::uint64_t>()};
    const auto& t = h.at("train");
    meta->train = {t.at("learning_rate"), t.at("batch_size"), t.at("epochs"), t.at("grad_clip_norm"),
                   t.at("validation_fraction"), t.at("seed"), t.value("standardize_targets", false),
                   t.value("lr_decay", 1.0), t.value("weight_decay", 0.0)};
    meta->input_layout = h.at("input_layout");
    meta->input_scale = h.at("input_scale");
    meta->dist = h.at("dist");
  }
  return p;
}

}  // namespace gbcost
