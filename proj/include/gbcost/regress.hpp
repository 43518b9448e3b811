#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gbcost {

/// N samples x K features. The intercept is not stored; ols_fit appends it as
/// the final coefficient.
struct DesignMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> feature_names;
};

struct TrainingMeta {
  std::string dist;
  std::size_t samples = 0;
  std::string feature_set;
};

/// OLS fit. Coefficient vectors have K+1 entries, intercept last.
struct LinearModel {
  std::vector<std::string> feature_names;
  std::vector<double> coefficients;
  std::vector<double> std_errors;
  std::vector<double> p_values;
  TrainingMeta meta;

  double predict(std::span<const double> features) const;
  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
};

struct EvalMetrics {
  double mse = 0.0;
  double mae = 0.0;
  double r2 = 0.0;
};

/// Least squares through a Householder QR factorization. Standard errors use
/// the residual variance RSS/(N-K-1); p-values are two-sided under the normal
/// approximation. Throws RankDeficient naming the first dependent feature
/// (|R_kk| < 1e-10 * max |R_jj|) and InvalidArgument when N <= K+1 or an
/// entry is not finite.
LinearModel ols_fit(const DesignMatrix& x, std::span<const double> y);

/// MSE, MAE and R^2 = 1 - SS_res/SS_tot with SS_tot taken about the mean of
/// `actual`. Throws UndefinedR2 when `actual` is constant.
EvalMetrics compute_metrics(std::span<const double> predicted, std::span<const double> actual);

/// Evaluates on a test design whose feature names must match the model's
/// (FeatureMismatch otherwise).
EvalMetrics evaluate(const LinearModel& model, const DesignMatrix& x, std::span<const double> y);

/// Drop predictors with p > alpha and refit once.
struct PrunedFit {
  LinearModel full;
  LinearModel reduced;
  std::vector<std::string> dropped;
};
PrunedFit fit_with_pruning(const DesignMatrix& x, std::span<const double> y, double alpha = 0.01);

/// Named predictor sets:
///   uninformed        (intercept only)
///   mmmsd             min_deg max_deg mean_deg std_deg
///   mmmsd+purepowers  mmmsd pure_powers
///   mmmsd+numgens     mmmsd num_gens
///   binomial-full     mmmsd pure_powers dimension
///   toric-full        mmmsd num_gens dimension
///   purepowers, numgens, dimension   single predictors
/// Throws ConfigError for an unknown name.
const std::vector<std::string>& feature_set(const std::string& name);
std::vector<std::string> feature_set_names();

/// All features available for one dataset, plus its response.
struct FeatureTable {
  std::string name;
  std::vector<std::string> columns;
  Eigen::MatrixXd values;  // rows x columns
  std::vector<double> targets;

  std::size_t rows() const noexcept { return targets.size(); }
  /// Throws FeatureMismatch when a requested feature is not available.
  DesignMatrix select(const std::vector<std::string>& features, std::span<const std::size_t> rows) const;
  std::vector<double> select_targets(std::span<const std::size_t> rows) const;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded random permutation cut at floor(train_fraction * n).
Split split_indices(std::size_t n, double train_fraction, std::uint64_t seed);

struct CrossEvalResult {
  std::vector<std::string> train_names;
  std::vector<std::string> test_names;
  /// r2[i][j]; NaN when undefined. Entries with i's dataset equal to j's use the
  /// held-out split, all others the full test dataset.
  std::vector<std::vector<double>> r2;
  std::vector<LinearModel> models;
};

/// Fits `feature_set_name` on the train split of every training table and
/// evaluates every cell. Cells are computed in parallel.
CrossEvalResult cross_eval(std::span<const FeatureTable> train, std::span<const FeatureTable> test,
                           const std::string& feature_set_name, double train_fraction,
                           std::uint64_t seed);

}  // namespace gbcost
