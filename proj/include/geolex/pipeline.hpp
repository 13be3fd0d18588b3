#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "geolex/similarity.hpp"
#include "geolex/synth.hpp"

namespace geolex {

inline constexpr const char* kToolVersion = "geolex 1.0.0";

// Every tunable of the batch pipeline. Flags map onto these 1:1.
struct RunConfig {
  std::filesystem::path regions_path;
  std::vector<std::string> inputs;  // paths or globs
  std::filesystem::path stopwords_path = "data/stopwords_en.txt";
  uint64_t top_k = 5000;
  double bin_width_km = 1000.0;
  CosineMode cosine_mode = CosineMode::shared_only;
  bool population_scaling = false;
  double per_capita_rate = 0.001;
  double earth_radius_km = 6371.0;
  uint64_t seed = 0;
  std::filesystem::path out_dir = "out";
  size_t workers = std::thread::hardware_concurrency();
};

// build: ingest the corpus and write out/snapshots/<region>.bow, an ingest
// report, and a build manifest. Regions that end up with zero records are
// skipped with a warning.
void cmd_build(const RunConfig& config);

// compare: load every snapshot and write out/pairs.csv (one row per
// unordered region pair).
void cmd_compare(const RunConfig& config);

// analyze: read a pairs file (default out/pairs.csv) and write bins.csv,
// one fcity_<region>.csv per region, and trend.txt. Also accepts a bare
// two-column distance_km,similarity file, in which case each row is one
// observation and no fcity files are produced.
void cmd_analyze(const RunConfig& config, const std::filesystem::path& pairs_path = {});

// synth: write a planted-gradient corpus plus matching region config under
// out_dir, with a manifest of output checksums.
void cmd_synth(const SynthParams& params, const std::filesystem::path& out_dir);

// run: build, compare, analyze in sequence; the output tree is byte-equal
// to running the three stages separately with the same config.
void cmd_run(const RunConfig& config);

// Recompute the checksum of every fixture listed in <data_dir>/MANIFEST and
// throw DataError on any mismatch or missing file. Returns the number of
// files verified.
size_t verify_fixtures(const std::filesystem::path& data_dir);

}  // namespace geolex
