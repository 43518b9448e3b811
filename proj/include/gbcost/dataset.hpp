#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gbcost/buchberger.hpp"
#include "gbcost/idealgen.hpp"
#include "gbcost/invariants.hpp"

namespace gbcost {

inline constexpr int kSchemaVersion = 1;

/// {"kind":"binomial","n":3,"d":20,"s":10,"mode":"weighted"} or
/// {"kind":"toric","D":2,"L":0,"U":5,"n":8}.
nlohmann::ordered_json dist_to_json(const DistSpec& spec);
/// Accepts the JSON form or a short name ("3-20-10-weighted", "T(2,0,5,8)").
/// Throws ConfigError.
DistSpec parse_dist(const std::string& text);
DistSpec dist_from_json(const nlohmann::json& j);

/// One generated sample. `generators` is empty for a timeout or a zero ideal.
struct SampleRecord {
  std::uint64_t id = 0;
  std::uint64_t seed = 0;
  DistSpec dist;
  std::optional<IntMatrix> matrix;
  std::vector<Polynomial> generators;
  Strategy strategy = Strategy::degree;
  RunStats stats;
  std::optional<FeatureVector> features;
  std::optional<std::string> error;

  bool usable() const noexcept { return !error && features.has_value(); }
};

nlohmann::ordered_json record_to_json(const SampleRecord& r);
/// Throws DataError on malformed input.
SampleRecord record_from_json(const nlohmann::json& j);

struct CorpusHeader {
  DistSpec dist;
  std::uint64_t count = 0;
  std::uint64_t base_seed = 0;
  Strategy strategy = Strategy::degree;
  std::uint64_t budget = 0;
};

nlohmann::ordered_json header_to_json(const CorpusHeader& h);
CorpusHeader header_from_json(const nlohmann::json& j);

struct Corpus {
  CorpusHeader header;
  std::vector<SampleRecord> records;
};

/// Reads a JSONL corpus: one header line then one record per line.
/// Throws DataError on unreadable files, schema mismatch or bad records.
Corpus read_corpus(const std::string& path);
Corpus read_corpus(std::istream& in);

}  // namespace gbcost
