#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gbcost/dataset.hpp"
#include "gbcost/gru.hpp"
#include "gbcost/regress.hpp"

namespace gbcost {

inline constexpr std::uint64_t kDefaultToricBudget = 1'000'000;

/// Draws and measures samples of one distribution. make() is a pure function
/// of (id, base_seed) and safe to call concurrently.
class SampleGenerator {
 public:
  SampleGenerator(const DistSpec& dist, Strategy strategy, std::uint64_t budget = kDefaultToricBudget);

  SampleRecord make(std::uint64_t id, std::uint64_t base_seed) const;
  /// The generating set only (empty for a zero toric ideal). Throws
  /// BudgetExceeded on a saturation timeout.
  std::vector<Polynomial> ideal(std::uint64_t seed, std::optional<IntMatrix>* matrix = nullptr) const;

  const DistSpec& dist() const noexcept { return dist_; }

 private:
  DistSpec dist_;
  Strategy strategy_;
  std::uint64_t budget_;
  std::optional<BinomialSampler> binomial_;
  std::optional<ToricSampler> toric_;
};

struct GenerateOptions {
  DistSpec dist;
  std::uint64_t count = 0;
  std::uint64_t base_seed = 0;
  Strategy strategy = Strategy::degree;
  std::uint64_t budget = kDefaultToricBudget;
  /// 1 runs the serial path; more fans ids out over OpenMP threads.
  int workers = 1;
};

struct GenerateSummary {
  std::uint64_t count = 0;
  std::uint64_t usable = 0;
  std::uint64_t timeouts = 0;
  std::uint64_t zero_ideals = 0;
  double additions_mean = 0.0;
  double additions_std = 0.0;
  std::map<int, std::uint64_t> dimension_histogram;
};

/// Records with ids 0..count-1 in id order. Output does not depend on workers.
std::vector<SampleRecord> generate_records(const GenerateOptions& opt);
/// Writes the header line and one JSONL record per sample.
GenerateSummary generate(const GenerateOptions& opt, std::ostream& out);
/// Statistics over usable records; population standard deviation.
GenerateSummary summarize(std::span<const SampleRecord> records);
nlohmann::ordered_json summary_to_json(const GenerateSummary& s);

/// Runs every strategy on the same generators.
std::array<RunStats, 4> run_all_strategies(std::span<const Polynomial> generators);

struct StrategyRow {
  std::string dist;
  std::array<double, 4> mean{};
  std::array<double, 4> std{};
  std::uint64_t samples = 0;
  std::uint64_t excluded = 0;
};

StrategyRow strategy_row(const DistSpec& dist, std::uint64_t count, std::uint64_t base_seed, int workers,
                         std::uint64_t budget = kDefaultToricBudget);
/// dist,first,degree,normal,sugar,samples,excluded with "mean[std]" cells.
void write_strategy_csv(std::span<const StrategyRow> rows, std::ostream& out);

/// Feature columns per distribution kind: binomial sets carry pure_powers,
/// toric sets carry num_gens; both carry the degree statistics and dimension.
FeatureTable feature_table(const Corpus& corpus);
void write_feature_csv(const FeatureTable& table, std::ostream& out);

/// Binomial corpora scale by 1/d; toric corpora by 1/(largest generator degree).
double default_input_scale(const Corpus& corpus);
/// One step per generator: lead exponents then trailing exponents, times `scale`.
/// Generators are ordered by increasing leading monomial (then trailing
/// monomial) under the corpus order. Rows align with feature_table(corpus).
SequenceDataset sequence_dataset(const Corpus& corpus, double scale);

enum class ModelKind : std::uint8_t { uninformed, linear, rnn };
std::string_view to_string(ModelKind k) noexcept;
/// Throws ConfigError.
ModelKind parse_model_kind(std::string_view name);

struct ExperimentConfig {
  ModelKind kind = ModelKind::linear;
  std::string feature_set = "mmmsd+purepowers";
  double train_fraction = 0.9;
  std::uint64_t split_seed = 0;
  GruConfig gru;
  TrainConfig train;
};

struct ExperimentReport {
  ModelKind kind = ModelKind::linear;
  std::string dist;
  std::string feature_set;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  double training_mean = 0.0;
  EvalMetrics holdout;
  std::optional<LinearModel> linear;
  std::optional<PrunedFit> pruned;
  std::optional<TrainResult> rnn;
  double input_scale = 1.0;
  /// (predicted, actual) on the holdout, in holdout order.
  std::vector<std::pair<double, double>> predictions;
};

/// Fits on the train split and scores the holdout. Throws ConfigError for a
/// bad split fraction, FeatureMismatch, DivergenceError.
ExperimentReport run_experiment(const Corpus& corpus, const ExperimentConfig& cfg);
nlohmann::ordered_json report_to_json(const ExperimentReport& r);
void write_predictions_csv(const ExperimentReport& r, std::ostream& out);

struct CrossMatrix {
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  /// nullopt marks an incompatible cell; NaN an undefined R^2.
  std::vector<std::vector<std::optional<double>>> r2;
};

CrossMatrix cross_matrix(std::span<const Corpus> train, std::span<const Corpus> test, const ExperimentConfig& cfg);
void write_cross_csv(const CrossMatrix& m, std::ostream& out);

/// Dimension histograms of 3-20-4-{weighted,uniform} and 3-20-10-{weighted,uniform}.
struct DimensionTable {
  std::vector<std::string> dists;
  std::vector<std::map<int, std::uint64_t>> histograms;
};
DimensionTable repro_table1(std::uint64_t count, std::uint64_t base_seed, int workers);
void write_dimension_csv(const DimensionTable& t, std::ostream& out);

/// Strategy rows for n-5-10-weighted over the given n.
std::vector<StrategyRow> repro_table3(std::span<const int> ns, std::uint64_t count, std::uint64_t base_seed,
                                      int workers);

/// Uninformed, linear (mmmsd+purepowers) and rnn on one 3-20-10-weighted corpus.
std::vector<ExperimentReport> repro_table9(std::uint64_t count, std::uint64_t base_seed, int workers,
                                           const ExperimentConfig& base);
void write_metrics_csv(std::span<const ExperimentReport> reports, std::ostream& out);

}  // namespace gbcost
