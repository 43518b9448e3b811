#include "gbcost/regress.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "gbcost/errors.hpp"
#include "gbcost/rng.hpp"

namespace gbcost {

namespace {

const std::map<std::string, std::vector<std::string>>& registry() {
  static const std::map<std::string, std::vector<std::string>> sets = {
      {"uninformed", {}},
      {"mmmsd", {"min_deg", "max_deg", "mean_deg", "std_deg"}},
      {"mmmsd+purepowers", {"min_deg", "max_deg", "mean_deg", "std_deg", "pure_powers"}},
      {"mmmsd+numgens", {"min_deg", "max_deg", "mean_deg", "std_deg", "num_gens"}},
      {"binomial-full", {"min_deg", "max_deg", "mean_deg", "std_deg", "pure_powers", "dimension"}},
      {"toric-full", {"min_deg", "max_deg", "mean_deg", "std_deg", "num_gens", "dimension"}},
      {"purepowers", {"pure_powers"}},
      {"numgens", {"num_gens"}},
      {"dimension", {"dimension"}},
  };
  return sets;
}

}  // namespace

double LinearModel::predict(std::span<const double> features) const {
  if (features.size() + 1 != coefficients.size()) throw DimensionError("feature count mismatch");
  double y = coefficients.back();
  for (std::size_t k = 0; k < features.size(); ++k) y += coefficients[k] * features[k];
  return y;
}

Eigen::VectorXd LinearModel::predict(const Eigen::MatrixXd& x) const {
  if (static_cast<std::size_t>(x.cols()) + 1 != coefficients.size())
    throw DimensionError("feature count mismatch");
  const Eigen::Index k = x.cols();
  Eigen::VectorXd beta(k);
  for (Eigen::Index j = 0; j < k; ++j) beta(j) = coefficients[static_cast<std::size_t>(j)];
  Eigen::VectorXd y = x * beta;
  y.array() += coefficients.back();
  return y;
}

LinearModel ols_fit(const DesignMatrix& x, std::span<const double> y) {
  const Eigen::Index n = x.values.rows();
  const Eigen::Index k = x.values.cols();
  if (static_cast<std::size_t>(k) != x.feature_names.size())
    throw DimensionError("feature names do not match the design matrix");
  if (static_cast<std::size_t>(n) != y.size()) throw DimensionError("response length mismatch");
  if (n <= k + 1) throw InvalidArgument("OLS needs more samples than coefficients");
  if (!x.values.allFinite()) throw InvalidArgument("design matrix has non-finite entries");

  // Factor [1 | X] so a dependent feature is reported by name rather than as
  // the intercept; results are permuted to put the intercept last.
  Eigen::MatrixXd a(n, k + 1);
  a.col(0).setOnes();
  a.rightCols(k) = x.values;
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);
  if (!yv.allFinite()) throw InvalidArgument("response has non-finite entries");

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(k + 1).triangularView<Eigen::Upper>();
  const double max_pivot = r.diagonal().cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j <= k; ++j) {
    if (std::abs(r(j, j)) < 1e-10 * max_pivot || max_pivot == 0.0)
      throw RankDeficient(j == 0 ? std::string("(intercept)")
                                 : x.feature_names[static_cast<std::size_t>(j - 1)]);
  }
  const Eigen::VectorXd qty = (qr.householderQ().transpose() * yv).head(k + 1);
  const Eigen::VectorXd beta = r.triangularView<Eigen::Upper>().solve(qty);

  const Eigen::VectorXd resid = yv - a * beta;
  const double sigma2 = resid.squaredNorm() / static_cast<double>(n - k - 1);
  const Eigen::MatrixXd rinv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k + 1, k + 1));

  LinearModel m;
  m.feature_names = x.feature_names;
  m.coefficients.resize(static_cast<std::size_t>(k + 1));
  m.std_errors.resize(static_cast<std::size_t>(k + 1));
  m.p_values.resize(static_cast<std::size_t>(k + 1));
  for (Eigen::Index j = 0; j <= k; ++j) {
    const auto dst = static_cast<std::size_t>(j == 0 ? k : j - 1);
    const double se = std::sqrt(sigma2 * rinv.row(j).squaredNorm());
    m.coefficients[dst] = beta(j);
    m.std_errors[dst] = se;
    if (se > 0.0) {
      m.p_values[dst] = std::erfc(std::abs(beta(j) / se) / std::sqrt(2.0));
    } else {
      m.p_values[dst] = beta(j) == 0.0 ? 1.0 : 0.0;
    }
  }
  m.meta.samples = static_cast<std::size_t>(n);
  return m;
}

EvalMetrics compute_metrics(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size()) throw DimensionError("prediction length mismatch");
  if (actual.empty()) throw InvalidArgument("metrics of an empty test set");
  const double count = static_cast<double>(actual.size());
  const double mean = std::accumulate(actual.begin(), actual.end(), 0.0) / count;
  double ss_res = 0.0, ss_tot = 0.0, abs_sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double e = predicted[i] - actual[i];
    ss_res += e * e;
    abs_sum += std::abs(e);
    const double d = actual[i] - mean;
    ss_tot += d * d;
  }
  if (ss_tot == 0.0) throw UndefinedR2("R^2 is undefined for a constant test response");
  return {ss_res / count, abs_sum / count, 1.0 - ss_res / ss_tot};
}

EvalMetrics evaluate(const LinearModel& model, const DesignMatrix& x, std::span<const double> y) {
  if (model.feature_names != x.feature_names)
    throw FeatureMismatch("test features do not match the model's training features");
  const Eigen::VectorXd pred = model.predict(x.values);
  return compute_metrics(std::span<const double>(pred.data(), static_cast<std::size_t>(pred.size())), y);
}

PrunedFit fit_with_pruning(const DesignMatrix& x, std::span<const double> y, double alpha) {
  PrunedFit out;
  out.full = ols_fit(x, y);
  std::vector<Eigen::Index> keep;
  for (std::size_t j = 0; j < x.feature_names.size(); ++j) {
    if (out.full.p_values[j] > alpha)
      out.dropped.push_back(x.feature_names[j]);
    else
      keep.push_back(static_cast<Eigen::Index>(j));
  }
  if (out.dropped.empty()) {
    out.reduced = out.full;
    return out;
  }
  DesignMatrix reduced;
  reduced.values.resize(x.values.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    reduced.values.col(static_cast<Eigen::Index>(c)) = x.values.col(keep[c]);
    reduced.feature_names.push_back(x.feature_names[static_cast<std::size_t>(keep[c])]);
  }
  out.reduced = ols_fit(reduced, y);
  out.reduced.meta = out.full.meta;
  return out;
}

const std::vector<std::string>& feature_set(const std::string& name) {
  const auto& sets = registry();
  auto it = sets.find(name);
  if (it == sets.end()) throw ConfigError("unknown feature set '" + name + "'");
  return it->second;
}

std::vector<std::string> feature_set_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

DesignMatrix FeatureTable::select(const std::vector<std::string>& features,
                                  std::span<const std::size_t> row_ids) const {
  std::vector<Eigen::Index> cols;
  for (const std::string& f : features) {
    auto it = std::find(columns.begin(), columns.end(), f);
    if (it == columns.end())
      throw FeatureMismatch("feature '" + f + "' is not available in dataset " + name);
    cols.push_back(static_cast<Eigen::Index>(it - columns.begin()));
  }
  DesignMatrix d;
  d.feature_names = features;
  d.values.resize(static_cast<Eigen::Index>(row_ids.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < row_ids.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      d.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          values(static_cast<Eigen::Index>(row_ids[r]), cols[c]);
  return d;
}

std::vector<double> FeatureTable::select_targets(std::span<const std::size_t> row_ids) const {
  std::vector<double> out;
  out.reserve(row_ids.size());
  for (std::size_t r : row_ids) out.push_back(targets[r]);
  return out;
}

Split split_indices(std::size_t n, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError("train fraction must lie in (0, 1)");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(perm));
  const auto cut = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
  Split s;
  s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(cut));
  s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(cut), perm.end());
  return s;
}

CrossEvalResult cross_eval(std::span<const FeatureTable> train, std::span<const FeatureTable> test,
                           const std::string& feature_set_name, double train_fraction,
                           std::uint64_t seed) {
  const std::vector<std::string>& features = feature_set(feature_set_name);
  CrossEvalResult out;
  std::vector<Split> splits;
  for (const FeatureTable& t : train) {
    out.train_names.push_back(t.name);
    splits.push_back(split_indices(t.rows(), train_fraction, seed));
    const DesignMatrix x = t.select(features, splits.back().train);
    LinearModel m = ols_fit(x, t.select_targets(splits.back().train));
    m.meta = {t.name, splits.back().train.size(), feature_set_name};
    out.models.push_back(std::move(m));
  }
  for (const FeatureTable& t : test) {
    out.test_names.push_back(t.name);
    // Surface feature mismatches before the parallel section.
    (void)t.select(features, std::span<const std::size_t>{});
  }
  out.r2.assign(train.size(), std::vector<double>(test.size(), std::numeric_limits<double>::quiet_NaN()));

  const auto cells = static_cast<std::int64_t>(train.size() * test.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t cell = 0; cell < cells; ++cell) {
    const auto i = static_cast<std::size_t>(cell) / test.size();
    const auto j = static_cast<std::size_t>(cell) % test.size();
    const FeatureTable& tt = test[j];
    std::vector<std::size_t> rows;
    if (train[i].name == tt.name) {
      rows = splits[i].test;
    } else {
      rows.resize(tt.rows());
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    try {
      out.r2[i][j] = evaluate(out.models[i], tt.select(features, rows), tt.select_targets(rows)).r2;
    } catch (const UndefinedR2&) {
    }
  }
  return out;
}

}  // namespace gbcost
