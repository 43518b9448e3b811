// gbcost: generate ideal corpora, tabulate strategy costs, fit cost models.
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "gbcost/errors.hpp"
#include "gbcost/pipeline.hpp"

using namespace gbcost;

namespace {

// "-" or empty writes to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw DataError("cannot write " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    if (file_) {
      file_->close();
      if (!*file_) throw DataError("failed writing output");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

Strategy strategy_arg(const std::string& name) {
  const auto s = parse_strategy(name);
  if (!s) throw ConfigError("unknown strategy '" + name + "'");
  return *s;
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  Output out(path);
  out.stream() << j.dump(2) << '\n';
  out.close();
}

struct Common {
  std::string out = "-";
  std::uint64_t count = 10000;
  std::uint64_t seed = 0;
  int workers = 1;
  std::uint64_t budget = kDefaultToricBudget;
};

struct RnnArgs {
  std::size_t hidden = 128;
  std::size_t epochs = 20;
  std::size_t batch = 64;
  double lr = 1e-3;
  double clip = 1.0;
  std::uint64_t seed = 0;
  bool standardize = false;
  double lr_decay = 1.0;
  double weight_decay = 0.0;
  std::string checkpoint;
};

void add_rnn_flags(CLI::App* cmd, RnnArgs& a) {
  cmd->add_option("--hidden", a.hidden, "GRU hidden width")->capture_default_str();
  cmd->add_option("--epochs", a.epochs)->capture_default_str();
  cmd->add_option("--batch", a.batch)->capture_default_str();
  cmd->add_option("--lr", a.lr, "Adam learning rate")->capture_default_str();
  cmd->add_option("--clip", a.clip, "global gradient-norm clip")->capture_default_str();
  cmd->add_option("--train-seed", a.seed, "initialisation and shuffle seed")->capture_default_str();
  cmd->add_flag("--standardize", a.standardize, "fit standardized targets");
  cmd->add_option("--lr-decay", a.lr_decay, "learning rate multiplier per epoch")->capture_default_str();
  cmd->add_option("--weight-decay", a.weight_decay, "decoupled weight decay")->capture_default_str();
}

void apply_rnn(const RnnArgs& a, ExperimentConfig& cfg) {
  cfg.gru.hidden = a.hidden;
  cfg.gru.seed = a.seed;
  cfg.train.epochs = a.epochs;
  cfg.train.batch_size = a.batch;
  cfg.train.learning_rate = a.lr;
  cfg.train.grad_clip_norm = a.clip;
  cfg.train.seed = a.seed;
  cfg.train.standardize_targets = a.standardize;
  cfg.train.lr_decay = a.lr_decay;
  cfg.train.weight_decay = a.weight_decay;
}

std::vector<Corpus> read_all(const std::vector<std::string>& paths) {
  std::vector<Corpus> out;
  for (const std::string& p : paths) out.push_back(read_corpus(p));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Groebner basis cost corpora and models"};
  app.require_subcommand(1);

  Common c;
  std::string dist_text;
  std::vector<std::string> dists;
  std::string strategy = "degree";
  std::string input;
  std::string features = "mmmsd+purepowers";
  std::string predictions;
  std::string model = "linear";
  std::vector<std::string> train_paths, test_paths;
  std::uint64_t split_seed = 0;
  double train_fraction = 0.9;
  RnnArgs rnn;
  std::string table;
  std::vector<int> ns{2, 3, 4, 5, 6, 7, 8};

  auto add_common = [&](CLI::App* cmd, bool budget) {
    cmd->add_option("--out", c.out, "output path, - for stdout")->capture_default_str();
    cmd->add_option("--count", c.count, "samples per distribution")->capture_default_str();
    cmd->add_option("--seed", c.seed, "base seed")->capture_default_str();
    cmd->add_option("--workers", c.workers, "OpenMP threads, 1 for the serial path")->capture_default_str();
    if (budget) cmd->add_option("--budget", c.budget, "toric saturation pair budget")->capture_default_str();
  };
  auto add_split = [&](CLI::App* cmd) {
    cmd->add_option("--split-seed", split_seed)->capture_default_str();
    cmd->add_option("--train-fraction", train_fraction)->capture_default_str();
  };

  auto* gen = app.add_subcommand("generate", "sample ideals and write a JSONL corpus");
  add_common(gen, true);
  gen->add_option("--dist", dist_text, "JSON spec or short name such as 3-20-10-weighted")->required();
  gen->add_option("--strategy", strategy)->capture_default_str();

  auto* strat = app.add_subcommand("strategy-table", "mean[std] additions of all four strategies");
  add_common(strat, true);
  strat->add_option("--dist", dists, "one or more distributions")->required();

  auto* feat = app.add_subcommand("featurize", "corpus to feature CSV");
  feat->add_option("--in", input)->required();
  feat->add_option("--out", c.out)->capture_default_str();

  auto* fit = app.add_subcommand("fit-linear", "fit an OLS or uninformed model on a 90/10 split");
  fit->add_option("--in", input)->required();
  fit->add_option("--out", c.out, "JSON report")->capture_default_str();
  fit->add_option("--features", features)->capture_default_str();
  fit->add_option("--model", model, "linear or uninformed")->capture_default_str();
  fit->add_option("--predictions", predictions, "predicted,actual CSV");
  add_split(fit);

  auto* trn = app.add_subcommand("train-rnn", "train the GRU cost model");
  trn->add_option("--in", input)->required();
  trn->add_option("--out", c.out, "JSON report")->capture_default_str();
  trn->add_option("--predictions", predictions);
  trn->add_option("--checkpoint", rnn.checkpoint, "write trained parameters here");
  add_split(trn);
  add_rnn_flags(trn, rnn);

  auto* cross = app.add_subcommand("cross-matrix", "train x test R^2 grid");
  cross->add_option("--train", train_paths)->required();
  cross->add_option("--test", test_paths)->required();
  cross->add_option("--model", model)->capture_default_str();
  cross->add_option("--features", features)->capture_default_str();
  cross->add_option("--out", c.out)->capture_default_str();
  add_split(cross);
  add_rnn_flags(cross, rnn);

  auto* repro = app.add_subcommand("repro", "regenerate a reference table");
  add_common(repro, false);
  repro->add_option("table", table, "table1, table3 or table9")->required()->check(
      CLI::IsMember({"table1", "table3", "table9"}));
  repro->add_option("--n", ns, "variable counts for table3")->capture_default_str();
  repro->add_option("--features", features)->capture_default_str();
  add_split(repro);
  add_rnn_flags(repro, rnn);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    ExperimentConfig cfg;
    cfg.feature_set = features;
    cfg.split_seed = split_seed;
    cfg.train_fraction = train_fraction;
    apply_rnn(rnn, cfg);

    if (*gen) {
      GenerateOptions opt;
      opt.dist = parse_dist(dist_text);
      opt.count = c.count;
      opt.base_seed = c.seed;
      opt.strategy = strategy_arg(strategy);
      opt.budget = c.budget;
      opt.workers = c.workers;
      Output out(c.out);
      const GenerateSummary s = generate(opt, out.stream());
      out.close();
      std::cerr << summary_to_json(s).dump(2) << '\n';
    } else if (*strat) {
      std::vector<StrategyRow> rows;
      for (const std::string& d : dists) rows.push_back(strategy_row(parse_dist(d), c.count, c.seed, c.workers, c.budget));
      Output out(c.out);
      write_strategy_csv(rows, out.stream());
      out.close();
    } else if (*feat) {
      Output out(c.out);
      write_feature_csv(feature_table(read_corpus(input)), out.stream());
      out.close();
    } else if (*fit || *trn) {
      cfg.kind = *trn ? ModelKind::rnn : parse_model_kind(model);
      if (cfg.kind == ModelKind::rnn && *fit) throw ConfigError("use train-rnn for the rnn model");
      const ExperimentReport rep = run_experiment(read_corpus(input), cfg);
      write_json(c.out, report_to_json(rep));
      if (!predictions.empty()) {
        Output p(predictions);
        write_predictions_csv(rep, p.stream());
        p.close();
      }
      if (rep.rnn && !rnn.checkpoint.empty()) {
        CheckpointMeta meta;
        meta.config = cfg.gru;
        meta.config.input_dim = rep.rnn->params.input_dim();
        meta.train = cfg.train;
        meta.dist = rep.dist;
        meta.input_scale = rep.input_scale;
        save_checkpoint(rnn.checkpoint, rep.rnn->params, meta);
      }
    } else if (*cross) {
      cfg.kind = parse_model_kind(model);
      const std::vector<Corpus> tr = read_all(train_paths);
      const std::vector<Corpus> te = read_all(test_paths);
      Output out(c.out);
      write_cross_csv(cross_matrix(tr, te, cfg), out.stream());
      out.close();
    } else if (*repro) {
      Output out(c.out);
      if (table == "table1") {
        write_dimension_csv(repro_table1(c.count, c.seed, c.workers), out.stream());
      } else if (table == "table3") {
        write_strategy_csv(repro_table3(ns, c.count, c.seed, c.workers), out.stream());
      } else {
        write_metrics_csv(repro_table9(c.count, c.seed, c.workers, cfg), out.stream());
      }
      out.close();
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const FeatureMismatch& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const UnsupportedParameter& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
