#include "gbcost/gru.hpp"

#include <algorithm>
#include <cmath>

#include "gbcost/errors.hpp"
#include "gbcost/rng.hpp"

namespace gbcost {

namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

std::size_t gate_row(Gate g, std::size_t hidden, std::size_t row) {
  return static_cast<std::size_t>(g) * hidden + row;
}

void check_batch(const GruParams& p, std::span<const Sequence> xs, std::span<const double> ys) {
  if (xs.empty()) throw InvalidArgument("gradient of an empty batch");
  if (xs.size() != ys.size()) throw DimensionError("batch inputs and targets differ in length");
  for (const Sequence& x : xs)
    if (x.rows() > 0 && static_cast<std::size_t>(x.cols()) != p.input_dim())
      throw DimensionError("sequence width does not match the model input dimension");
}

}  // namespace

std::size_t param_count(const GruConfig& cfg) {
  const std::size_t i = cfg.input_dim, h = cfg.hidden;
  return 3 * (i * h + h * h + 2 * h) + h + 1;
}

GruParams::GruParams(std::size_t input_dim, std::size_t hidden)
    : input_(input_dim), hidden_(hidden) {
  if (input_dim == 0 || hidden == 0) throw InvalidArgument("GRU dimensions must be positive");
  flat_.assign(param_count({input_dim, hidden, 1, 0}), 0.0);
}

Eigen::Map<const RowMatrix> GruParams::w() const {
  return {flat_.data() + offset_w(), static_cast<Eigen::Index>(3 * hidden_), static_cast<Eigen::Index>(input_)};
}
Eigen::Map<RowMatrix> GruParams::w() {
  return {flat_.data() + offset_w(), static_cast<Eigen::Index>(3 * hidden_), static_cast<Eigen::Index>(input_)};
}
Eigen::Map<const RowMatrix> GruParams::u() const {
  return {flat_.data() + offset_u(), static_cast<Eigen::Index>(3 * hidden_), static_cast<Eigen::Index>(hidden_)};
}
Eigen::Map<RowMatrix> GruParams::u() {
  return {flat_.data() + offset_u(), static_cast<Eigen::Index>(3 * hidden_), static_cast<Eigen::Index>(hidden_)};
}
Eigen::Map<const Eigen::VectorXd> GruParams::bx() const {
  return {flat_.data() + offset_bx(), static_cast<Eigen::Index>(3 * hidden_)};
}
Eigen::Map<const Eigen::VectorXd> GruParams::bh() const {
  return {flat_.data() + offset_bh(), static_cast<Eigen::Index>(3 * hidden_)};
}
Eigen::Map<const Eigen::VectorXd> GruParams::w_out() const {
  return {flat_.data() + offset_wout(), static_cast<Eigen::Index>(hidden_)};
}

double GruParams::w_at(Gate g, std::size_t row, std::size_t col) const {
  return flat_[offset_w() + gate_row(g, hidden_, row) * input_ + col];
}
double GruParams::u_at(Gate g, std::size_t row, std::size_t col) const {
  return flat_[offset_u() + gate_row(g, hidden_, row) * hidden_ + col];
}
double GruParams::bx_at(Gate g, std::size_t row) const {
  return flat_[offset_bx() + gate_row(g, hidden_, row)];
}
double GruParams::bh_at(Gate g, std::size_t row) const {
  return flat_[offset_bh() + gate_row(g, hidden_, row)];
}

GruParams init_params(const GruConfig& cfg) {
  GruParams p(cfg.input_dim, cfg.hidden);
  Rng rng(cfg.seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(cfg.hidden));
  ParamVector& f = p.flat();
  for (std::size_t k = 0; k + 1 < f.size(); ++k) f[k] = rng.uniform(-bound, bound);
  f.back() = 0.0;
  return p;
}

// Reference implementation: explicit loops over units, no matrix library.

namespace {

struct StepCache {
  std::vector<double> h_prev, z, r, n, ghn;
};

std::vector<StepCache> forward_steps(const GruParams& p, const Sequence& x, std::vector<double>& h) {
  const std::size_t hid = p.hidden(), in = p.input_dim();
  h.assign(hid, 0.0);
  std::vector<StepCache> steps;
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    StepCache c;
    c.h_prev = h;
    c.z.resize(hid);
    c.r.resize(hid);
    c.n.resize(hid);
    c.ghn.resize(hid);
    for (std::size_t i = 0; i < hid; ++i) {
      double az = p.bx_at(Gate::z, i) + p.bh_at(Gate::z, i);
      double ar = p.bx_at(Gate::r, i) + p.bh_at(Gate::r, i);
      double xn = p.bx_at(Gate::n, i);
      double hn = p.bh_at(Gate::n, i);
      for (std::size_t k = 0; k < in; ++k) {
        const double xv = x(t, static_cast<Eigen::Index>(k));
        az += p.w_at(Gate::z, i, k) * xv;
        ar += p.w_at(Gate::r, i, k) * xv;
        xn += p.w_at(Gate::n, i, k) * xv;
      }
      for (std::size_t j = 0; j < hid; ++j) {
        az += p.u_at(Gate::z, i, j) * c.h_prev[j];
        ar += p.u_at(Gate::r, i, j) * c.h_prev[j];
        hn += p.u_at(Gate::n, i, j) * c.h_prev[j];
      }
      c.z[i] = sigmoid(az);
      c.r[i] = sigmoid(ar);
      c.ghn[i] = hn;
      c.n[i] = std::tanh(xn + c.r[i] * hn);
    }
    for (std::size_t i = 0; i < hid; ++i) h[i] = (1.0 - c.z[i]) * c.n[i] + c.z[i] * c.h_prev[i];
    steps.push_back(std::move(c));
  }
  return steps;
}

}  // namespace

double forward_reference(const GruParams& p, const Sequence& x) {
  if (x.rows() > 0 && static_cast<std::size_t>(x.cols()) != p.input_dim())
    throw DimensionError("sequence width does not match the model input dimension");
  std::vector<double> h;
  forward_steps(p, x, h);
  double y = p.b_out();
  for (std::size_t i = 0; i < p.hidden(); ++i) y += p.w_out()(static_cast<Eigen::Index>(i)) * h[i];
  return y;
}

double loss_grad_reference(const GruParams& p, std::span<const Sequence> xs,
                           std::span<const double> ys, std::vector<double>& grad) {
  check_batch(p, xs, ys);
  const std::size_t hid = p.hidden(), in = p.input_dim();
  grad.assign(p.size(), 0.0);
  const double inv_b = 1.0 / static_cast<double>(xs.size());
  double loss = 0.0;

  auto gw = [&](Gate g, std::size_t i, std::size_t k) -> double& {
    return grad[p.offset_w() + gate_row(g, hid, i) * in + k];
  };
  auto gu = [&](Gate g, std::size_t i, std::size_t j) -> double& {
    return grad[p.offset_u() + gate_row(g, hid, i) * hid + j];
  };
  auto gbx = [&](Gate g, std::size_t i) -> double& { return grad[p.offset_bx() + gate_row(g, hid, i)]; };
  auto gbh = [&](Gate g, std::size_t i) -> double& { return grad[p.offset_bh() + gate_row(g, hid, i)]; };

  for (std::size_t b = 0; b < xs.size(); ++b) {
    const Sequence& x = xs[b];
    std::vector<double> h;
    const std::vector<StepCache> steps = forward_steps(p, x, h);
    double y = p.b_out();
    for (std::size_t i = 0; i < hid; ++i) y += p.w_out()(static_cast<Eigen::Index>(i)) * h[i];
    const double err = y - ys[b];
    loss += err * err * inv_b;
    const double dy = 2.0 * err * inv_b;

    grad.back() += dy;
    std::vector<double> dh(hid);
    for (std::size_t i = 0; i < hid; ++i) {
      grad[p.offset_wout() + i] += dy * h[i];
      dh[i] = dy * p.w_out()(static_cast<Eigen::Index>(i));
    }
    for (std::size_t t = steps.size(); t-- > 0;) {
      const StepCache& c = steps[t];
      std::vector<double> daz(hid), dar(hid), dan(hid), dghn(hid), dprev(hid, 0.0);
      for (std::size_t i = 0; i < hid; ++i) {
        const double dn = dh[i] * (1.0 - c.z[i]);
        const double dz = dh[i] * (c.h_prev[i] - c.n[i]);
        dprev[i] += dh[i] * c.z[i];
        dan[i] = dn * (1.0 - c.n[i] * c.n[i]);
        daz[i] = dz * c.z[i] * (1.0 - c.z[i]);
        dar[i] = dan[i] * c.ghn[i] * c.r[i] * (1.0 - c.r[i]);
        dghn[i] = dan[i] * c.r[i];
      }
      for (std::size_t i = 0; i < hid; ++i) {
        for (std::size_t k = 0; k < in; ++k) {
          const double xv = x(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k));
          gw(Gate::z, i, k) += daz[i] * xv;
          gw(Gate::r, i, k) += dar[i] * xv;
          gw(Gate::n, i, k) += dan[i] * xv;
        }
        for (std::size_t j = 0; j < hid; ++j) {
          gu(Gate::z, i, j) += daz[i] * c.h_prev[j];
          gu(Gate::r, i, j) += dar[i] * c.h_prev[j];
          gu(Gate::n, i, j) += dghn[i] * c.h_prev[j];
          dprev[j] += p.u_at(Gate::z, i, j) * daz[i] + p.u_at(Gate::r, i, j) * dar[i] +
                      p.u_at(Gate::n, i, j) * dghn[i];
        }
        gbx(Gate::z, i) += daz[i];
        gbx(Gate::r, i) += dar[i];
        gbx(Gate::n, i) += dan[i];
        gbh(Gate::z, i) += daz[i];
        gbh(Gate::r, i) += dar[i];
        gbh(Gate::n, i) += dghn[i];
      }
      dh = std::move(dprev);
    }
  }
  return loss;
}

// Batched kernel. Hidden states are H x B with one column per sample.

namespace {

struct BatchTrace {
  std::vector<Eigen::MatrixXd> x;       // I x B per step
  std::vector<Eigen::MatrixXd> h;       // H x B, h[0] = 0
  std::vector<Eigen::MatrixXd> z, r, n, ghn;
  std::vector<Eigen::RowVectorXd> mask; // 1 where the step is inside the sample
};

Eigen::Index max_len(std::span<const Sequence> xs) {
  Eigen::Index t = 0;
  for (const Sequence& s : xs) t = std::max(t, s.rows());
  return t;
}

BatchTrace forward_batch(const GruParams& p, std::span<const Sequence> xs, bool keep) {
  const auto hid = static_cast<Eigen::Index>(p.hidden());
  const auto in = static_cast<Eigen::Index>(p.input_dim());
  const auto nb = static_cast<Eigen::Index>(xs.size());
  const Eigen::Index steps = max_len(xs);
  const auto w = p.w();
  const auto u = p.u();
  const auto bx = p.bx();
  const auto bh = p.bh();

  BatchTrace tr;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(hid, nb);
  tr.h.push_back(h);
  for (Eigen::Index t = 0; t < steps; ++t) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(in, nb);
    Eigen::RowVectorXd mask = Eigen::RowVectorXd::Zero(nb);
    for (Eigen::Index b = 0; b < nb; ++b) {
      const Sequence& s = xs[static_cast<std::size_t>(b)];
      if (t < s.rows()) {
        x.col(b) = s.row(t).transpose();
        mask(b) = 1.0;
      }
    }
    Eigen::MatrixXd ax = w * x;
    ax.colwise() += bx;
    Eigen::MatrixXd ah = u * h;
    ah.colwise() += bh;
    Eigen::MatrixXd z = ((-(ax.topRows(hid) + ah.topRows(hid)).array()).exp() + 1.0).inverse().matrix();
    Eigen::MatrixXd r =
        ((-(ax.middleRows(hid, hid) + ah.middleRows(hid, hid)).array()).exp() + 1.0).inverse().matrix();
    Eigen::MatrixXd ghn = ah.bottomRows(hid);
    Eigen::MatrixXd n = (ax.bottomRows(hid).array() + r.array() * ghn.array()).tanh().matrix();
    Eigen::MatrixXd hn = ((1.0 - z.array()) * n.array() + z.array() * h.array()).matrix();
    for (Eigen::Index b = 0; b < nb; ++b)
      if (mask(b) != 0.0) h.col(b) = hn.col(b);
    if (keep) {
      tr.x.push_back(std::move(x));
      tr.z.push_back(std::move(z));
      tr.r.push_back(std::move(r));
      tr.n.push_back(std::move(n));
      tr.ghn.push_back(std::move(ghn));
      tr.mask.push_back(std::move(mask));
      tr.h.push_back(h);
    }
  }
  if (!keep) tr.h.push_back(h);
  return tr;
}

// Adds the unnormalized chunk gradient of sum (y - t)^2 * scale into grad.
double chunk_grad(const GruParams& p, std::span<const Sequence> xs, std::span<const double> ys,
                  double scale, ParamVector& grad) {
  const auto hid = static_cast<Eigen::Index>(p.hidden());
  const auto in = static_cast<Eigen::Index>(p.input_dim());
  const auto nb = static_cast<Eigen::Index>(xs.size());
  const BatchTrace tr = forward_batch(p, xs, true);
  const Eigen::MatrixXd& h_last = tr.h.back();

  Eigen::RowVectorXd y = p.w_out().transpose() * h_last;
  y.array() += p.b_out();
  Eigen::RowVectorXd err(nb);
  for (Eigen::Index b = 0; b < nb; ++b) err(b) = y(b) - ys[static_cast<std::size_t>(b)];
  const double loss = err.squaredNorm() * scale;
  const Eigen::RowVectorXd dy = 2.0 * scale * err;

  Eigen::Map<RowMatrix> gw(grad.data() + p.offset_w(), 3 * hid, in);
  Eigen::Map<RowMatrix> gu(grad.data() + p.offset_u(), 3 * hid, hid);
  Eigen::Map<Eigen::VectorXd> gbx(grad.data() + p.offset_bx(), 3 * hid);
  Eigen::Map<Eigen::VectorXd> gbh(grad.data() + p.offset_bh(), 3 * hid);
  Eigen::Map<Eigen::VectorXd> gwout(grad.data() + p.offset_wout(), hid);

  grad.back() += dy.sum();
  gwout += h_last * dy.transpose();
  Eigen::MatrixXd dh = p.w_out() * dy;
  const auto u = p.u();

  Eigen::MatrixXd dax(3 * hid, nb), dah(3 * hid, nb);
  for (std::size_t t = tr.x.size(); t-- > 0;) {
    const Eigen::MatrixXd& hp = tr.h[t];
    const auto z = tr.z[t].array();
    const auto r = tr.r[t].array();
    const auto n = tr.n[t].array();
    const Eigen::ArrayXXd m = tr.mask[t].replicate(hid, 1).array();
    const Eigen::ArrayXXd dhn = dh.array() * m;

    const Eigen::ArrayXXd dn = dhn * (1.0 - z);
    const Eigen::ArrayXXd dz = dhn * (hp.array() - n);
    const Eigen::ArrayXXd dan = dn * (1.0 - n * n);
    const Eigen::ArrayXXd daz = dz * z * (1.0 - z);
    const Eigen::ArrayXXd dar = dan * tr.ghn[t].array() * r * (1.0 - r);
    dax.topRows(hid) = daz.matrix();
    dax.middleRows(hid, hid) = dar.matrix();
    dax.bottomRows(hid) = dan.matrix();
    dah.topRows(hid) = daz.matrix();
    dah.middleRows(hid, hid) = dar.matrix();
    dah.bottomRows(hid) = (dan * r).matrix();

    gw.noalias() += dax * tr.x[t].transpose();
    gu.noalias() += dah * hp.transpose();
    gbx += dax.rowwise().sum();
    gbh += dah.rowwise().sum();
    Eigen::MatrixXd dprev = (dh.array() * (1.0 - m) + dhn * z).matrix();
    dprev.noalias() += u.transpose() * dah;
    dh = std::move(dprev);
  }
  return loss;
}

}  // namespace

double loss_grad_batched(const GruParams& p, std::span<const Sequence> xs,
                         std::span<const double> ys, std::vector<double>& grad, std::size_t chunk) {
  check_batch(p, xs, ys);
  if (chunk == 0) throw InvalidArgument("chunk size must be positive");
  const std::size_t chunks = (xs.size() + chunk - 1) / chunk;
  const double scale = 1.0 / static_cast<double>(xs.size());
  // Aligned buffers so that Eigen's reductions into them sum in a fixed order.
  std::vector<ParamVector> partial(chunks, ParamVector(p.size(), 0.0));
  std::vector<double> losses(chunks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * chunk;
    const std::size_t len = std::min(chunk, xs.size() - lo);
    losses[static_cast<std::size_t>(c)] =
        chunk_grad(p, xs.subspan(lo, len), ys.subspan(lo, len), scale, partial[static_cast<std::size_t>(c)]);
  }
  grad.assign(partial[0].begin(), partial[0].end());
  double loss = losses[0];
  for (std::size_t c = 1; c < chunks; ++c) {
    for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += partial[c][k];
    loss += losses[c];
  }
  return loss;
}

std::vector<double> predict_batched(const GruParams& p, std::span<const Sequence> xs) {
  for (const Sequence& x : xs)
    if (x.rows() > 0 && static_cast<std::size_t>(x.cols()) != p.input_dim())
      throw DimensionError("sequence width does not match the model input dimension");
  constexpr std::size_t kChunk = 256;
  std::vector<double> out(xs.size());
  const std::size_t chunks = (xs.size() + kChunk - 1) / kChunk;
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t len = std::min(kChunk, xs.size() - lo);
    const BatchTrace tr = forward_batch(p, xs.subspan(lo, len), false);
    const Eigen::RowVectorXd y = p.w_out().transpose() * tr.h.back();
    for (std::size_t b = 0; b < len; ++b) out[lo + b] = y(static_cast<Eigen::Index>(b)) + p.b_out();
  }
  return out;
}

}  // namespace gbcost
