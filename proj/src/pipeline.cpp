#include "gbcost/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "gbcost/errors.hpp"
#include "gbcost/rng.hpp"

namespace gbcost {

namespace {

constexpr std::uint64_t kBlock = 1024;

std::string fixed(double v, int digits = 2) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct Accumulator {
  GenerateSummary s;
  double sum = 0.0;
  double sumsq = 0.0;

  void add(const SampleRecord& r) {
    ++s.count;
    if (r.error) {
      ++s.timeouts;
      return;
    }
    if (!r.features) {
      ++s.zero_ideals;
      return;
    }
    ++s.usable;
    const auto a = static_cast<double>(r.stats.polynomial_additions);
    sum += a;
    sumsq += a * a;
    ++s.dimension_histogram[r.features->dimension];
  }

  GenerateSummary finish() const {
    GenerateSummary out = s;
    if (s.usable > 0) {
      const auto n = static_cast<double>(s.usable);
      out.additions_mean = sum / n;
      out.additions_std = std::sqrt(std::max(0.0, sumsq / n - out.additions_mean * out.additions_mean));
    }
    return out;
  }
};

std::pair<double, double> mean_std(std::span<const double> v) {
  if (v.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / n)};
}

bool is_toric(const DistSpec& d) { return std::holds_alternative<ToricDistSpec>(d); }

std::vector<const SampleRecord*> usable_records(const Corpus& corpus) {
  std::vector<const SampleRecord*> out;
  for (const SampleRecord& r : corpus.records)
    if (r.usable()) out.push_back(&r);
  return out;
}

}  // namespace

SampleGenerator::SampleGenerator(const DistSpec& dist, Strategy strategy, std::uint64_t budget)
    : dist_(dist), strategy_(strategy), budget_(budget) {
  validate(dist);
  if (const auto* b = std::get_if<BinomialDistSpec>(&dist))
    binomial_.emplace(*b);
  else
    toric_.emplace(std::get<ToricDistSpec>(dist));
}

std::vector<Polynomial> SampleGenerator::ideal(std::uint64_t seed, std::optional<IntMatrix>* matrix) const {
  if (binomial_) return binomial_->sample(seed);
  ToricMatrix a = toric_->sample(seed);
  if (matrix) *matrix = a.entries;
  return toric_ideal(a, budget_);
}

SampleRecord SampleGenerator::make(std::uint64_t id, std::uint64_t base_seed) const {
  SampleRecord r;
  r.id = id;
  r.seed = mix_seed(base_seed, id);
  r.dist = dist_;
  r.strategy = strategy_;
  try {
    r.generators = ideal(r.seed, toric_ ? &r.matrix : nullptr);
  } catch (const BudgetExceeded&) {
    r.error = "timeout";
    return r;
  }
  if (r.generators.empty()) return r;
  if (r.matrix)
    for (const Polynomial& g : r.generators)
      if (!satisfies_toric_membership(*r.matrix, g)) {
        r.error = "membership check failed";
        return r;
      }
  BuchbergerOptions opts;
  opts.strategy = strategy_;
  const GroebnerResult gb = run(r.generators, opts);
  r.stats = gb.stats;
  const int dim = krull_dimension(gb.basis, static_cast<std::size_t>(ring_vars(dist_)));
  r.features = extract_features(r.generators, dim);
  return r;
}

std::vector<SampleRecord> generate_records(const GenerateOptions& opt) {
  if (opt.workers < 1) throw ConfigError("workers must be at least 1");
  const SampleGenerator gen(opt.dist, opt.strategy, opt.budget);
  std::vector<SampleRecord> out(opt.count);
  if (opt.workers == 1) {
    for (std::uint64_t id = 0; id < opt.count; ++id) out[id] = gen.make(id, opt.base_seed);
    return out;
  }
#pragma omp parallel for num_threads(opt.workers) schedule(dynamic, 8)
  for (std::int64_t id = 0; id < static_cast<std::int64_t>(opt.count); ++id)
    out[static_cast<std::size_t>(id)] = gen.make(static_cast<std::uint64_t>(id), opt.base_seed);
  return out;
}

GenerateSummary generate(const GenerateOptions& opt, std::ostream& out) {
  if (opt.workers < 1) throw ConfigError("workers must be at least 1");
  const SampleGenerator gen(opt.dist, opt.strategy, opt.budget);
  out << header_to_json({opt.dist, opt.count, opt.base_seed, opt.strategy, opt.budget}).dump() << '\n';
  Accumulator acc;
  std::vector<SampleRecord> block;
  std::vector<std::string> lines;
  for (std::uint64_t lo = 0; lo < opt.count; lo += kBlock) {
    const std::uint64_t len = std::min(kBlock, opt.count - lo);
    block.assign(len, SampleRecord{});
    lines.assign(len, std::string{});
    if (opt.workers == 1) {
      for (std::uint64_t k = 0; k < len; ++k) {
        block[k] = gen.make(lo + k, opt.base_seed);
        lines[k] = record_to_json(block[k]).dump();
      }
    } else {
#pragma omp parallel for num_threads(opt.workers) schedule(dynamic, 8)
      for (std::int64_t k = 0; k < static_cast<std::int64_t>(len); ++k) {
        const auto u = static_cast<std::size_t>(k);
        block[u] = gen.make(lo + u, opt.base_seed);
        lines[u] = record_to_json(block[u]).dump();
      }
    }
    for (std::uint64_t k = 0; k < len; ++k) {
      out << lines[k] << '\n';
      acc.add(block[k]);
    }
  }
  if (!out) throw DataError("failed writing corpus");
  return acc.finish();
}

GenerateSummary summarize(std::span<const SampleRecord> records) {
  Accumulator acc;
  for (const SampleRecord& r : records) acc.add(r);
  return acc.finish();
}

nlohmann::ordered_json summary_to_json(const GenerateSummary& s) {
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [dim, n] : s.dimension_histogram) hist[std::to_string(dim)] = n;
  return {{"count", s.count},
          {"usable", s.usable},
          {"timeouts", s.timeouts},
          {"zero_ideals", s.zero_ideals},
          {"additions_mean", s.additions_mean},
          {"additions_std", s.additions_std},
          {"dimension_histogram", hist}};
}

std::array<RunStats, 4> run_all_strategies(std::span<const Polynomial> generators) {
  std::array<RunStats, 4> out;
  for (std::size_t k = 0; k < 4; ++k) {
    BuchbergerOptions opts;
    opts.strategy = kAllStrategies[k];
    out[k] = run(generators, opts).stats;
  }
  return out;
}

StrategyRow strategy_row(const DistSpec& dist, std::uint64_t count, std::uint64_t base_seed, int workers,
                         std::uint64_t budget) {
  if (workers < 1) throw ConfigError("workers must be at least 1");
  const SampleGenerator gen(dist, Strategy::degree, budget);
  std::vector<std::optional<std::array<RunStats, 4>>> per(count);
#pragma omp parallel for num_threads(workers) schedule(dynamic, 8) if (workers > 1)
  for (std::int64_t id = 0; id < static_cast<std::int64_t>(count); ++id) {
    try {
      const auto gens = gen.ideal(mix_seed(base_seed, static_cast<std::uint64_t>(id)));
      if (!gens.empty()) per[static_cast<std::size_t>(id)] = run_all_strategies(gens);
    } catch (const BudgetExceeded&) {
    }
  }
  StrategyRow row;
  row.dist = dist_name(dist);
  std::array<std::vector<double>, 4> adds;
  for (const auto& p : per) {
    if (!p) {
      ++row.excluded;
      continue;
    }
    ++row.samples;
    for (std::size_t k = 0; k < 4; ++k) adds[k].push_back(static_cast<double>((*p)[k].polynomial_additions));
  }
  for (std::size_t k = 0; k < 4; ++k) std::tie(row.mean[k], row.std[k]) = mean_std(adds[k]);
  return row;
}

void write_strategy_csv(std::span<const StrategyRow> rows, std::ostream& out) {
  out << "dist,first,degree,normal,sugar,samples,excluded\n";
  for (const StrategyRow& r : rows) {
    out << '"' << r.dist << '"';
    for (std::size_t k = 0; k < 4; ++k) out << ',' << fixed(r.mean[k]) << '[' << fixed(r.std[k]) << ']';
    out << ',' << r.samples << ',' << r.excluded << '\n';
  }
}

FeatureTable feature_table(const Corpus& corpus) {
  FeatureTable t;
  t.name = dist_name(corpus.header.dist);
  const bool toric = is_toric(corpus.header.dist);
  t.columns = {"min_deg", "max_deg", "mean_deg", "std_deg", toric ? "num_gens" : "pure_powers", "dimension"};
  const auto rows = usable_records(corpus);
  t.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const FeatureVector& f = *rows[i]->features;
    const auto r = static_cast<Eigen::Index>(i);
    t.values(r, 0) = f.min_deg;
    t.values(r, 1) = f.max_deg;
    t.values(r, 2) = f.mean_deg;
    t.values(r, 3) = f.std_deg;
    t.values(r, 4) = toric ? f.num_gens : f.pure_powers;
    t.values(r, 5) = f.dimension;
    t.targets.push_back(static_cast<double>(rows[i]->stats.polynomial_additions));
  }
  return t;
}

void write_feature_csv(const FeatureTable& table, std::ostream& out) {
  for (const std::string& c : table.columns) out << c << ',';
  out << "polynomial_additions\n";
  char buf[64];
  for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", table.values(r, c));
      out << buf << ',';
    }
    out << static_cast<std::uint64_t>(table.targets[static_cast<std::size_t>(r)]) << '\n';
  }
}

double default_input_scale(const Corpus& corpus) {
  if (const auto* b = std::get_if<BinomialDistSpec>(&corpus.header.dist)) return 1.0 / b->d;
  int max_deg = 1;
  for (const SampleRecord* r : usable_records(corpus)) max_deg = std::max(max_deg, r->features->max_deg);
  return 1.0 / max_deg;
}

SequenceDataset sequence_dataset(const Corpus& corpus, double scale) {
  const auto n = static_cast<std::size_t>(ring_vars(corpus.header.dist));
  SequenceDataset ds;
  ds.input_dim = 2 * n;
  std::vector<const Polynomial*> gens;
  for (const SampleRecord* r : usable_records(corpus)) {
    gens.clear();
    for (const Polynomial& g : r->generators) {
      if (g.size() != 2) throw DataError("sequence input expects binomial generators");
      gens.push_back(&g);
    }
    // Canonical order: increasing leading monomial, then trailing monomial.
    std::stable_sort(gens.begin(), gens.end(), [](const Polynomial* a, const Polynomial* b) {
      const auto ta = a->terms(), tb = b->terms();
      const auto lead = order_cmp(ta[0].mono, tb[0].mono, a->order());
      return lead != 0 ? lead < 0 : order_cmp(ta[1].mono, tb[1].mono, a->order()) < 0;
    });
    Sequence x(static_cast<Eigen::Index>(gens.size()), static_cast<Eigen::Index>(2 * n));
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const auto terms = gens[g]->terms();
      for (std::size_t v = 0; v < n; ++v) {
        x(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(v)) = terms[0].mono[v] * scale;
        x(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(n + v)) = terms[1].mono[v] * scale;
      }
    }
    ds.inputs.push_back(std::move(x));
    ds.targets.push_back(static_cast<double>(r->stats.polynomial_additions));
  }
  return ds;
}

std::string_view to_string(ModelKind k) noexcept {
  switch (k) {
    case ModelKind::uninformed:
      return "uninformed";
    case ModelKind::linear:
      return "linear";
    case ModelKind::rnn:
      return "rnn";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  for (ModelKind k : {ModelKind::uninformed, ModelKind::linear, ModelKind::rnn})
    if (name == to_string(k)) return k;
  throw ConfigError("unknown model kind '" + std::string(name) + "'");
}

namespace {

void check_split(double f) {
  if (!(f > 0.5 && f < 1.0)) throw ConfigError("train fraction must lie in (0.5, 1)");
}

struct TrainedRnn {
  TrainResult result;
  double scale = 1.0;
};

TrainedRnn train_rnn(const Corpus& corpus, const Split& split, const ExperimentConfig& cfg) {
  TrainedRnn out;
  out.scale = default_input_scale(corpus);
  const SequenceDataset all = sequence_dataset(corpus, out.scale);
  const SequenceDataset tr = all.subset(split.train);
  GruConfig g = cfg.gru;
  g.input_dim = all.input_dim;
  if (const auto* b = std::get_if<BinomialDistSpec>(&corpus.header.dist)) g.sequence_len = static_cast<std::size_t>(b->s);
  out.result = train(tr, g, cfg.train);
  return out;
}

}  // namespace

ExperimentReport run_experiment(const Corpus& corpus, const ExperimentConfig& cfg) {
  check_split(cfg.train_fraction);
  ExperimentReport rep;
  rep.kind = cfg.kind;
  rep.dist = dist_name(corpus.header.dist);
  const FeatureTable table = feature_table(corpus);
  const Split split = split_indices(table.rows(), cfg.train_fraction, cfg.split_seed);
  rep.train_size = split.train.size();
  rep.test_size = split.test.size();
  if (split.train.empty() || split.test.empty()) throw DataError("dataset too small to split");
  const std::vector<double> y_train = table.select_targets(split.train);
  const std::vector<double> y_test = table.select_targets(split.test);
  rep.training_mean = std::accumulate(y_train.begin(), y_train.end(), 0.0) / static_cast<double>(y_train.size());

  std::vector<double> pred;
  switch (cfg.kind) {
    case ModelKind::uninformed:
      rep.feature_set = "uninformed";
      pred.assign(y_test.size(), rep.training_mean);
      break;
    case ModelKind::linear: {
      rep.feature_set = cfg.feature_set;
      const auto& features = feature_set(cfg.feature_set);
      PrunedFit fit = fit_with_pruning(table.select(features, split.train), y_train);
      fit.full.meta = {rep.dist, split.train.size(), cfg.feature_set};
      fit.reduced.meta = fit.full.meta;
      const DesignMatrix x_test = table.select(features, split.test);
      const Eigen::VectorXd p = fit.full.predict(x_test.values);
      pred.assign(p.data(), p.data() + p.size());
      rep.linear = fit.full;
      rep.pruned = std::move(fit);
      break;
    }
    case ModelKind::rnn: {
      rep.feature_set = "sequence";
      TrainedRnn t = train_rnn(corpus, split, cfg);
      rep.input_scale = t.scale;
      const SequenceDataset test = sequence_dataset(corpus, t.scale).subset(split.test);
      pred = predict_batched(t.result.params, test.inputs);
      rep.rnn = std::move(t.result);
      break;
    }
  }
  rep.holdout = compute_metrics(pred, y_test);
  for (std::size_t i = 0; i < pred.size(); ++i) rep.predictions.emplace_back(pred[i], y_test[i]);
  return rep;
}

namespace {

nlohmann::ordered_json model_to_json(const LinearModel& m) {
  nlohmann::ordered_json j;
  j["features"] = m.feature_names;
  j["coefficients"] = m.coefficients;
  j["std_errors"] = m.std_errors;
  j["p_values"] = m.p_values;
  j["intercept_last"] = true;
  j["training_meta"] = {{"dist", m.meta.dist}, {"samples", m.meta.samples}, {"feature_set", m.meta.feature_set}};
  return j;
}

}  // namespace

nlohmann::ordered_json report_to_json(const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["model"] = std::string(to_string(r.kind));
  j["dist"] = r.dist;
  j["feature_set"] = r.feature_set;
  j["train_size"] = r.train_size;
  j["test_size"] = r.test_size;
  j["split"] = "train fraction of a seeded permutation; the holdout is the remainder";
  j["training_mean"] = r.training_mean;
  j["holdout"] = {{"mse", r.holdout.mse}, {"mae", r.holdout.mae}, {"r2", r.holdout.r2}};
  if (r.linear) j["linear"] = model_to_json(*r.linear);
  if (r.pruned) {
    j["pruned"] = model_to_json(r.pruned->reduced);
    j["pruned"]["dropped"] = r.pruned->dropped;
  }
  if (r.rnn) {
    nlohmann::ordered_json curve = nlohmann::ordered_json::array();
    for (const EpochLog& e : r.rnn->curve)
      curve.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"validation_loss", e.validation_loss}});
    j["rnn"] = {{"hidden", r.rnn->params.hidden()},
                {"input_dim", r.rnn->params.input_dim()},
                {"param_count", r.rnn->params.size()},
                {"input_scale", r.input_scale},
                {"best_epoch", r.rnn->best_epoch},
                {"best_validation_loss", r.rnn->best_validation_loss},
                {"curve", curve}};
  }
  return j;
}

void write_predictions_csv(const ExperimentReport& r, std::ostream& out) {
  out << "predicted,actual\n";
  char buf[64];
  for (const auto& [p, a] : r.predictions) {
    std::snprintf(buf, sizeof buf, "%.6f,%.0f\n", p, a);
    out << buf;
  }
}

CrossMatrix cross_matrix(std::span<const Corpus> train, std::span<const Corpus> test, const ExperimentConfig& cfg) {
  check_split(cfg.train_fraction);
  CrossMatrix m;
  for (const Corpus& c : train) m.rows.push_back(dist_name(c.header.dist));
  for (const Corpus& c : test) m.cols.push_back(dist_name(c.header.dist));
  m.r2.assign(train.size(), std::vector<std::optional<double>>(test.size()));

  if (cfg.kind != ModelKind::rnn) {
    std::vector<FeatureTable> tr, te;
    for (const Corpus& c : train) tr.push_back(feature_table(c));
    for (const Corpus& c : test) te.push_back(feature_table(c));
    const std::string set = cfg.kind == ModelKind::uninformed ? "uninformed" : cfg.feature_set;
    const CrossEvalResult res = cross_eval(tr, te, set, cfg.train_fraction, cfg.split_seed);
    for (std::size_t i = 0; i < train.size(); ++i)
      for (std::size_t j = 0; j < test.size(); ++j) m.r2[i][j] = res.r2[i][j];
    return m;
  }

  for (std::size_t i = 0; i < train.size(); ++i) {
    const FeatureTable table = feature_table(train[i]);
    const Split split = split_indices(table.rows(), cfg.train_fraction, cfg.split_seed);
    const TrainedRnn t = train_rnn(train[i], split, cfg);
    for (std::size_t j = 0; j < test.size(); ++j) {
      SequenceDataset ds = sequence_dataset(test[j], t.scale);
      if (ds.input_dim != t.result.params.input_dim()) continue;
      if (m.rows[i] == m.cols[j]) ds = ds.subset(split.test);
      try {
        m.r2[i][j] = evaluate_net(t.result.params, ds).r2;
      } catch (const UndefinedR2&) {
        m.r2[i][j] = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  return m;
}

void write_cross_csv(const CrossMatrix& m, std::ostream& out) {
  out << "train\\test";
  for (const std::string& c : m.cols) out << ",\"" << c << '"';
  out << '\n';
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    out << '"' << m.rows[i] << '"';
    for (const auto& cell : m.r2[i]) out << ',' << (cell ? fixed(*cell, 4) : std::string("incompatible"));
    out << '\n';
  }
}

DimensionTable repro_table1(std::uint64_t count, std::uint64_t base_seed, int workers) {
  DimensionTable t;
  for (const char* name : {"3-20-4-weighted", "3-20-4-uniform", "3-20-10-weighted", "3-20-10-uniform"}) {
    GenerateOptions opt;
    opt.dist = parse_dist_name(name);
    opt.count = count;
    opt.base_seed = base_seed;
    opt.workers = workers;
    const auto recs = generate_records(opt);
    t.dists.emplace_back(name);
    t.histograms.push_back(summarize(recs).dimension_histogram);
  }
  return t;
}

void write_dimension_csv(const DimensionTable& t, std::ostream& out) {
  int max_dim = 0;
  for (const auto& h : t.histograms)
    if (!h.empty()) max_dim = std::max(max_dim, h.rbegin()->first);
  out << "dimension";
  for (const std::string& d : t.dists) out << ",\"" << d << '"';
  out << '\n';
  for (int dim = 0; dim <= max_dim; ++dim) {
    out << dim;
    for (const auto& h : t.histograms) {
      auto it = h.find(dim);
      out << ',' << (it == h.end() ? 0 : it->second);
    }
    out << '\n';
  }
}

std::vector<StrategyRow> repro_table3(std::span<const int> ns, std::uint64_t count, std::uint64_t base_seed,
                                      int workers) {
  std::vector<StrategyRow> rows;
  for (int n : ns) rows.push_back(strategy_row(BinomialDistSpec{n, 5, 10, BinomialMode::weighted}, count, base_seed, workers));
  return rows;
}

std::vector<ExperimentReport> repro_table9(std::uint64_t count, std::uint64_t base_seed, int workers,
                                           const ExperimentConfig& base) {
  GenerateOptions opt;
  opt.dist = BinomialDistSpec{3, 20, 10, BinomialMode::weighted};
  opt.count = count;
  opt.base_seed = base_seed;
  opt.workers = workers;
  Corpus corpus;
  corpus.header = {opt.dist, count, base_seed, opt.strategy, opt.budget};
  corpus.records = generate_records(opt);
  std::vector<ExperimentReport> out;
  for (ModelKind k : {ModelKind::uninformed, ModelKind::linear, ModelKind::rnn}) {
    ExperimentConfig cfg = base;
    cfg.kind = k;
    out.push_back(run_experiment(corpus, cfg));
  }
  return out;
}

void write_metrics_csv(std::span<const ExperimentReport> reports, std::ostream& out) {
  out << "model,dist,feature_set,train_size,test_size,training_mean,mse,mae,r2\n";
  for (const ExperimentReport& r : reports)
    out << to_string(r.kind) << ",\"" << r.dist << "\"," << r.feature_set << ',' << r.train_size << ','
        << r.test_size << ',' << fixed(r.training_mean) << ',' << fixed(r.holdout.mse) << ','
        << fixed(r.holdout.mae) << ',' << fixed(r.holdout.r2, 4) << '\n';
}

}  // namespace gbcost
