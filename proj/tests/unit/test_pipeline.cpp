#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "gbcost/errors.hpp"
#include "gbcost/pipeline.hpp"
#include "gbcost/rng.hpp"

using namespace gbcost;

namespace {

std::string generate_text(const GenerateOptions& opt) {
  std::ostringstream out;
  generate(opt, out);
  return out.str();
}

Corpus corpus_of(const GenerateOptions& opt) {
  std::istringstream in(generate_text(opt));
  return read_corpus(in);
}

GenerateOptions opts(const std::string& dist, std::uint64_t count, std::uint64_t seed, int workers = 1) {
  GenerateOptions o;
  o.dist = parse_dist(dist);
  o.count = count;
  o.base_seed = seed;
  o.workers = workers;
  return o;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GBCOST_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Dist, JsonAndNameForms) {
  const DistSpec a = parse_dist(R"({"kind":"binomial","n":3,"d":20,"s":10,"mode":"weighted"})");
  EXPECT_EQ(dist_name(a), "3-20-10-weighted");
  const DistSpec t = parse_dist(R"({"kind":"toric","D":6,"L":0,"U":5,"n":8})");
  EXPECT_EQ(dist_name(t), "T(6,0,5,8)");
  EXPECT_EQ(dist_to_json(t).dump(), R"({"kind":"toric","D":6,"L":0,"U":5,"n":8})");
  EXPECT_THROW(parse_dist(R"({"kind":"binomial","n":3})"), ConfigError);
  EXPECT_THROW(parse_dist("{not json"), ConfigError);
}

TEST(Generate, EmptyCount) {
  std::ostringstream out;
  const GenerateSummary s = generate(opts("3-20-4-uniform", 0, 1), out);
  EXPECT_EQ(s.count, 0u);
  EXPECT_EQ(s.usable, 0u);
  EXPECT_TRUE(s.dimension_histogram.empty());
  std::istringstream in(out.str());
  const Corpus c = read_corpus(in);
  EXPECT_TRUE(c.records.empty());
  EXPECT_EQ(c.header.count, 0u);
}

TEST(Generate, RecordsAndSeeds) {
  const Corpus c = corpus_of(opts("3-20-10-weighted", 50, 9));
  ASSERT_EQ(c.records.size(), 50u);
  for (std::uint64_t i = 0; i < 50; ++i) {
    const SampleRecord& r = c.records[i];
    EXPECT_EQ(r.id, i);
    EXPECT_EQ(r.seed, mix_seed(9, i));
    EXPECT_EQ(r.generators.size(), 10u);
    ASSERT_TRUE(r.features.has_value());
    EXPECT_EQ(r.features->num_gens, 10);
    EXPECT_GE(r.features->dimension, 0);
    EXPECT_EQ(r.stats.pairs_processed, r.stats.zero_reductions + r.stats.nonzero_reductions);
    EXPECT_EQ(r.generators, BinomialSampler({3, 20, 10, BinomialMode::weighted}).sample(r.seed));
  }
}

TEST(Generate, ByteIdenticalAcrossRunsAndWorkers) {
  for (const char* dist : {"3-20-4-uniform", "T(2,0,5,8)"}) {
    const std::string serial = generate_text(opts(dist, 60, 17));
    EXPECT_EQ(serial, generate_text(opts(dist, 60, 17)));
    EXPECT_EQ(serial, generate_text(opts(dist, 60, 17, 4)));
    EXPECT_NE(serial, generate_text(opts(dist, 60, 18)));
  }
}

TEST(Generate, SchemaRoundTrip) {
  for (const char* dist : {"3-20-10-uniform", "T(4,0,5,8)"}) {
    const std::string text = generate_text(opts(dist, 20, 2));
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      const SampleRecord r = record_from_json(nlohmann::json::parse(line));
      EXPECT_EQ(record_to_json(r).dump(), line);
    }
  }
}

TEST(Generate, SummaryStatistics) {
  const auto recs = generate_records(opts("3-20-4-weighted", 80, 3));
  const GenerateSummary s = summarize(recs);
  double mean = 0, sq = 0;
  for (const auto& r : recs) mean += static_cast<double>(r.stats.polynomial_additions) / 80.0;
  for (const auto& r : recs) {
    const double d = static_cast<double>(r.stats.polynomial_additions) - mean;
    sq += d * d / 80.0;
  }
  EXPECT_NEAR(s.additions_mean, mean, 1e-9);
  EXPECT_NEAR(s.additions_std, std::sqrt(sq), 1e-9);
  std::uint64_t hist = 0;
  for (const auto& [dim, n] : s.dimension_histogram) hist += n;
  EXPECT_EQ(hist, 80u);
}

TEST(Generate, ToricTimeoutRecordedInBand) {
  GenerateOptions o = opts("T(6,0,10,8)", 6, 1);
  o.budget = 1;
  const auto recs = generate_records(o);
  const GenerateSummary s = summarize(recs);
  EXPECT_EQ(s.timeouts + s.zero_ideals + s.usable, 6u);
  EXPECT_GT(s.timeouts, 0u);
  for (const auto& r : recs)
    if (r.error) {
      EXPECT_EQ(*r.error, "timeout");
      EXPECT_TRUE(r.generators.empty());
      EXPECT_FALSE(r.usable());
      EXPECT_TRUE(r.matrix.has_value());
    }
}

TEST(Generate, ToricMembershipHolds) {
  for (const auto& r : generate_records(opts("T(2,0,5,8)", 30, 5))) {
    ASSERT_TRUE(r.matrix.has_value());
    for (const Polynomial& g : r.generators) EXPECT_TRUE(satisfies_toric_membership(*r.matrix, g));
  }
}

TEST(Generate, RejectsBadWorkers) { EXPECT_THROW(generate_records(opts("3-20-4-weighted", 1, 1, 0)), ConfigError); }

TEST(StrategyTable, SameIdealsForEveryStrategy) {
  const SampleGenerator gen(parse_dist("3-5-10-weighted"), Strategy::degree);
  for (std::uint64_t id = 0; id < 30; ++id) {
    const auto gens = gen.ideal(mix_seed(4, id));
    EXPECT_EQ(gens, gen.ideal(mix_seed(4, id)));
    const auto stats = run_all_strategies(gens);
    for (std::size_t k = 0; k < 4; ++k) {
      BuchbergerOptions o;
      o.strategy = kAllStrategies[k];
      EXPECT_EQ(stats[k], run(gens, o).stats);
    }
    // The Degree column is the measured additions of a generated record.
    EXPECT_EQ(stats[1].polynomial_additions, gen.make(id, 4).stats.polynomial_additions);
  }
}

TEST(StrategyTable, SingleSampleHasZeroStd) {
  const StrategyRow row = strategy_row(parse_dist("3-5-10-weighted"), 1, 0, 1);
  EXPECT_EQ(row.samples, 1u);
  for (double s : row.std) EXPECT_EQ(s, 0.0);
  std::ostringstream out;
  write_strategy_csv(std::vector<StrategyRow>{row}, out);
  EXPECT_NE(out.str().find("[0.00]"), std::string::npos);
}

TEST(StrategyTable, ParallelMatchesSerial) {
  const StrategyRow a = strategy_row(parse_dist("3-5-10-weighted"), 40, 6, 1);
  const StrategyRow b = strategy_row(parse_dist("3-5-10-weighted"), 40, 6, 3);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std, b.std);
}

TEST(Features, TableColumnsPerKind) {
  const FeatureTable bin = feature_table(corpus_of(opts("3-20-10-weighted", 30, 1)));
  EXPECT_EQ(bin.columns,
            (std::vector<std::string>{"min_deg", "max_deg", "mean_deg", "std_deg", "pure_powers", "dimension"}));
  EXPECT_EQ(bin.rows(), 30u);
  const FeatureTable tor = feature_table(corpus_of(opts("T(2,0,5,8)", 10, 1)));
  EXPECT_EQ(tor.columns[4], "num_gens");
  EXPECT_THROW(tor.select(feature_set("mmmsd+purepowers"), std::vector<std::size_t>{0}), FeatureMismatch);
}

TEST(Sequences, LayoutAndScale) {
  const Corpus c = corpus_of(opts("3-20-10-weighted", 5, 1));
  const SequenceDataset ds = sequence_dataset(c, default_input_scale(c));
  EXPECT_DOUBLE_EQ(default_input_scale(c), 1.0 / 20);
  ASSERT_EQ(ds.size(), 5u);
  EXPECT_EQ(ds.input_dim, 6u);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& gens = c.records[i].generators;
    const Sequence& x = ds.inputs[i];
    ASSERT_EQ(x.rows(), 10);
    // Rows are the generators' exponents (lead then trailing) in some order.
    std::multiset<std::vector<int>> want, got;
    for (const Polynomial& g : gens) {
      std::vector<int> row;
      for (const Term& t : g.terms())
        for (std::size_t v = 0; v < 3; ++v) row.push_back(t.mono[v]);
      want.insert(row);
    }
    std::vector<Monomial> leads;
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      std::vector<int> row;
      for (Eigen::Index k = 0; k < 6; ++k) row.push_back(static_cast<int>(std::lround(x(r, k) * 20.0)));
      leads.emplace_back(std::span<const int>(row.data(), 3));
      got.insert(row);
    }
    EXPECT_EQ(got, want);
    for (std::size_t r = 1; r < leads.size(); ++r)
      EXPECT_TRUE(order_cmp(leads[r - 1], leads[r], MonomialOrder::grevlex()) <= 0);
    EXPECT_EQ(ds.targets[i], static_cast<double>(c.records[i].stats.polynomial_additions));
  }
  // The input does not depend on the order the generators were sampled in.
  Corpus shuffled = c;
  Rng rng(3);
  for (SampleRecord& r : shuffled.records) rng.shuffle(std::span<Polynomial>(r.generators));
  const SequenceDataset again = sequence_dataset(shuffled, default_input_scale(shuffled));
  for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(again.inputs[i], ds.inputs[i]);
}

TEST(Experiment, UninformedPredictsTrainingMean) {
  const Corpus c = corpus_of(opts("3-20-4-uniform", 300, 2));
  ExperimentConfig cfg;
  cfg.kind = ModelKind::uninformed;
  const ExperimentReport r = run_experiment(c, cfg);
  EXPECT_EQ(r.train_size, 270u);
  EXPECT_EQ(r.test_size, 30u);
  for (const auto& [p, a] : r.predictions) EXPECT_DOUBLE_EQ(p, r.training_mean);
  EXPECT_LE(r.holdout.r2, 0.0);
  cfg.train_fraction = 0.4;
  EXPECT_THROW(run_experiment(c, cfg), ConfigError);
  cfg.train_fraction = 1.0;
  EXPECT_THROW(run_experiment(c, cfg), ConfigError);
}

TEST(Experiment, ReportsAreDeterministic) {
  const Corpus c = corpus_of(opts("3-20-10-weighted", 400, 2));
  ExperimentConfig cfg;
  const auto a = report_to_json(run_experiment(c, cfg)).dump();
  EXPECT_EQ(a, report_to_json(run_experiment(c, cfg)).dump());
  EXPECT_NE(a.find("\"pruned\""), std::string::npos);
}

TEST(CrossMatrix, DiagonalMatchesExperimentAndRnnShapes) {
  std::vector<Corpus> sets{corpus_of(opts("3-20-10-weighted", 300, 1)), corpus_of(opts("T(2,0,5,8)", 60, 1))};
  ExperimentConfig cfg;
  cfg.feature_set = "mmmsd";
  const CrossMatrix m = cross_matrix(sets, sets, cfg);
  EXPECT_NEAR(*m.r2[0][0], run_experiment(sets[0], cfg).holdout.r2, 1e-12);
  EXPECT_NEAR(*m.r2[1][1], run_experiment(sets[1], cfg).holdout.r2, 1e-12);

  cfg.kind = ModelKind::rnn;
  cfg.gru.hidden = 4;
  cfg.train.epochs = 1;
  const CrossMatrix rm = cross_matrix(sets, sets, cfg);
  EXPECT_TRUE(rm.r2[0][0].has_value());
  EXPECT_FALSE(rm.r2[0][1].has_value());
  EXPECT_FALSE(rm.r2[1][0].has_value());
  std::ostringstream out;
  write_cross_csv(rm, out);
  EXPECT_NE(out.str().find("incompatible"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  const auto dir = std::filesystem::temp_directory_path() / "gbcost_cli_test";
  std::filesystem::create_directories(dir);
  const std::string corpus = (dir / "c.jsonl").string();
  EXPECT_EQ(run_cli("generate --dist 3-20-4-uniform --count 30 --seed 1 --out " + corpus), 0);
  EXPECT_EQ(run_cli("featurize --in " + corpus + " --out " + (dir / "f.csv").string()), 0);
  EXPECT_EQ(run_cli("fit-linear --in " + corpus + " --out " + (dir / "m.json").string()), 0);
  EXPECT_EQ(run_cli("generate --dist 3-20-weighted --count 3"), 1);
  EXPECT_EQ(run_cli("generate --dist 3-20-4-uniform --strategy lex --count 3"), 1);
  EXPECT_EQ(run_cli("fit-linear --in " + corpus + " --features nope"), 1);
  EXPECT_EQ(run_cli("featurize --in " + (dir / "missing.jsonl").string()), 2);
  std::ofstream(dir / "bad.jsonl") << "{\"schema\":\"other\"}\n";
  EXPECT_EQ(run_cli("featurize --in " + (dir / "bad.jsonl").string()), 2);
  std::filesystem::remove_all(dir);
}
