#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "geolex/bow.hpp"
#include "geolex/geo.hpp"
#include "geolex/text.hpp"

namespace geolex {

struct RawRecord {
  std::string text;
  GeoPoint point;
  std::string id;          // optional
  std::string created_at;  // optional
  std::string lang;        // optional, folded to lowercase
};

enum class ParseStatus { ok, malformed, missing_field, out_of_range };

// One JSONL line -> record. Required keys: "text" (non-blank string),
// "lat"/"lon" (numbers in range). Unknown keys ignored; wrong-typed required
// keys count as missing. Never throws; the driver tallies each status.
ParseStatus parse_record(std::string_view line, RawRecord& out);

// lang metadata wins when present; otherwise the text must contain at least
// one English stopword token and be >= 60% ASCII letters/digits/whitespace/
// punctuation by codepoint.
bool is_english(const RawRecord& record, const StopwordSet& stopwords);

struct IngestCounters {
  uint64_t assigned = 0;
  uint64_t unassigned = 0;
  uint64_t non_english = 0;
  uint64_t errors = 0;

  uint64_t total() const { return assigned + unassigned + non_english + errors; }
};

struct IngestOptions {
  size_t workers = 1;
  bool population_scaling = false;
  double per_capita_rate = 0.001;
  uint64_t seed = 0;
};

struct IngestResult {
  std::vector<BowModel> models;           // one per region, config order
  IngestCounters counters;
  std::vector<uint64_t> region_records;   // assigned, before any subsampling
  std::vector<uint64_t> region_retained;  // records that reached the model
  std::vector<std::string> warnings;
};

// Streams every file, validates and assigns each line, preprocesses assigned
// records, and builds one model per region. Files are sharded across workers;
// results are independent of shard order. With population scaling on, each
// region keeps the floor(rate * population) records with the smallest seeded
// hash keys (all of them, with a warning, when fewer are available).
IngestResult ingest_corpus(const std::vector<std::filesystem::path>& files,
                           const std::vector<Region>& regions,
                           const StopwordSet& stopwords,
                           const IngestOptions& options);

}  // namespace geolex
