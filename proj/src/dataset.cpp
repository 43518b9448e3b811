#include "gbcost/dataset.hpp"

#include <fstream>
#include <istream>

#include "gbcost/errors.hpp"

namespace gbcost {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json dist_to_json(const DistSpec& spec) {
  ordered_json j;
  if (const auto* b = std::get_if<BinomialDistSpec>(&spec)) {
    j["kind"] = "binomial";
    j["n"] = b->n;
    j["d"] = b->d;
    j["s"] = b->s;
    j["mode"] = b->mode == BinomialMode::uniform ? "uniform" : "weighted";
  } else {
    const auto& t = std::get<ToricDistSpec>(spec);
    j["kind"] = "toric";
    j["D"] = t.D;
    j["L"] = t.L;
    j["U"] = t.U;
    j["n"] = t.n;
  }
  return j;
}

DistSpec dist_from_json(const json& j) {
  DistSpec spec;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "binomial") {
      const std::string mode = j.at("mode").get<std::string>();
      if (mode != "uniform" && mode != "weighted") throw ConfigError("unknown binomial mode '" + mode + "'");
      spec = BinomialDistSpec{j.at("n").get<int>(), j.at("d").get<int>(), j.at("s").get<int>(),
                              mode == "uniform" ? BinomialMode::uniform : BinomialMode::weighted};
    } else if (kind == "toric") {
      spec = ToricDistSpec{j.at("D").get<int>(), j.at("L").get<int>(), j.at("U").get<int>(), j.at("n").get<int>()};
    } else {
      throw ConfigError("unknown distribution kind '" + kind + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad distribution spec: ") + e.what());
  }
  validate(spec);
  return spec;
}

DistSpec parse_dist(const std::string& text) {
  const auto first = text.find_first_not_of(" \t");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad distribution JSON: ") + e.what());
    }
    return dist_from_json(j);
  }
  return parse_dist_name(text);
}

namespace {

ordered_json poly_to_json(const Polynomial& p) {
  ordered_json terms = ordered_json::array();
  for (const Term& t : p.terms()) {
    ordered_json exps = ordered_json::array();
    for (std::int32_t e : t.mono.exponents()) exps.push_back(e);
    terms.push_back(ordered_json::array({t.coeff.value(), std::move(exps)}));
  }
  return terms;
}

Polynomial poly_from_json(const json& j, std::size_t nvars) {
  std::vector<Term> terms;
  for (const json& t : j) {
    const auto exps = t.at(1).get<std::vector<int>>();
    if (exps.size() != nvars) throw DataError("generator exponent vector has the wrong length");
    terms.push_back({Fp(t.at(0).get<std::int64_t>()), Monomial(std::span<const int>(exps))});
  }
  return Polynomial(nvars, MonomialOrder::grevlex(), std::move(terms));
}

ordered_json stats_to_json(const RunStats& s) {
  return {{"polynomial_additions", s.polynomial_additions},
          {"pairs_processed", s.pairs_processed},
          {"zero_reductions", s.zero_reductions},
          {"nonzero_reductions", s.nonzero_reductions},
          {"gb_size", s.gb_size},
          {"gb_max_degree", s.gb_max_degree}};
}

RunStats stats_from_json(const json& j) {
  RunStats s;
  s.polynomial_additions = j.at("polynomial_additions").get<std::uint64_t>();
  s.pairs_processed = j.at("pairs_processed").get<std::uint64_t>();
  s.zero_reductions = j.at("zero_reductions").get<std::uint64_t>();
  s.nonzero_reductions = j.at("nonzero_reductions").get<std::uint64_t>();
  s.gb_size = j.at("gb_size").get<std::uint64_t>();
  s.gb_max_degree = j.at("gb_max_degree").get<int>();
  return s;
}

ordered_json features_to_json(const FeatureVector& f) {
  return {{"min_deg", f.min_deg},         {"max_deg", f.max_deg},   {"mean_deg", f.mean_deg},
          {"std_deg", f.std_deg},         {"pure_powers", f.pure_powers},
          {"num_gens", f.num_gens},       {"dimension", f.dimension}};
}

FeatureVector features_from_json(const json& j) {
  FeatureVector f;
  f.min_deg = j.at("min_deg").get<int>();
  f.max_deg = j.at("max_deg").get<int>();
  f.mean_deg = j.at("mean_deg").get<double>();
  f.std_deg = j.at("std_deg").get<double>();
  f.pure_powers = j.at("pure_powers").get<int>();
  f.num_gens = j.at("num_gens").get<int>();
  f.dimension = j.at("dimension").get<int>();
  return f;
}

Strategy strategy_from_json(const json& j) {
  const auto s = parse_strategy(j.get<std::string>());
  if (!s) throw DataError("unknown strategy '" + j.get<std::string>() + "'");
  return *s;
}

}  // namespace

ordered_json record_to_json(const SampleRecord& r) {
  ordered_json j;
  j["id"] = r.id;
  j["seed"] = r.seed;
  j["dist"] = dist_name(r.dist);
  if (r.matrix) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < r.matrix->rows(); ++i) {
      ordered_json row = ordered_json::array();
      for (std::size_t c = 0; c < r.matrix->cols(); ++c) row.push_back((*r.matrix)(i, c));
      rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
  }
  ordered_json gens = ordered_json::array();
  for (const Polynomial& g : r.generators) gens.push_back(poly_to_json(g));
  j["generators"] = std::move(gens);
  j["strategy"] = std::string(to_string(r.strategy));
  j["stats"] = stats_to_json(r.stats);
  j["features"] = r.features ? features_to_json(*r.features) : ordered_json(nullptr);
  j["error"] = r.error ? ordered_json(*r.error) : ordered_json(nullptr);
  return j;
}

SampleRecord record_from_json(const json& j) {
  try {
    SampleRecord r;
    r.id = j.at("id").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.dist = parse_dist_name(j.at("dist").get<std::string>());
    if (j.contains("matrix")) {
      const auto rows = j.at("matrix").get<std::vector<std::vector<std::int64_t>>>();
      IntMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw DataError("ragged matrix");
        for (std::size_t c = 0; c < m.cols(); ++c) m(i, c) = rows[i][c];
      }
      r.matrix = std::move(m);
    }
    const auto nvars = static_cast<std::size_t>(ring_vars(r.dist));
    for (const json& g : j.at("generators")) r.generators.push_back(poly_from_json(g, nvars));
    r.strategy = strategy_from_json(j.at("strategy"));
    r.stats = stats_from_json(j.at("stats"));
    if (!j.at("features").is_null()) r.features = features_from_json(j.at("features"));
    if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed sample record: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("malformed sample record: ") + e.what());
  }
}

ordered_json header_to_json(const CorpusHeader& h) {
  ordered_json j;
  j["schema"] = "gbcost-samples";
  j["version"] = kSchemaVersion;
  j["dist"] = dist_to_json(h.dist);
  j["count"] = h.count;
  j["base_seed"] = h.base_seed;
  j["strategy"] = std::string(to_string(h.strategy));
  j["budget"] = h.budget;
  j["seed_mixing"] = "splitmix64(base ^ splitmix64(id + 0x9E3779B97F4A7C15))";
  return j;
}

CorpusHeader header_from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != "gbcost-samples")
      throw DataError("not a sample corpus");
    if (j.at("version").get<int>() != kSchemaVersion)
      throw DataError("unsupported corpus schema version " + std::to_string(j.at("version").get<int>()));
    CorpusHeader h;
    h.dist = dist_from_json(j.at("dist"));
    h.count = j.at("count").get<std::uint64_t>();
    h.base_seed = j.at("base_seed").get<std::uint64_t>();
    h.strategy = strategy_from_json(j.at("strategy"));
    h.budget = j.at("budget").get<std::uint64_t>();
    return h;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed corpus header: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("malformed corpus header: ") + e.what());
  }
}

Corpus read_corpus(std::istream& in) {
  Corpus c;
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty corpus");
  try {
    c.header = header_from_json(json::parse(line));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed corpus header: ") + e.what());
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(std::string("malformed sample line: ") + e.what());
    }
    c.records.push_back(record_from_json(j));
  }
  return c;
}

Corpus read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read corpus " + path);
  return read_corpus(in);
}

}  // namespace gbcost
