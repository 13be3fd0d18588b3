#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace geolex {

// Token occurrence tally for one region. record_count is the number of
// records consumed, empty token lists included; it is the normalization
// denominator later.
struct BowModel {
  std::string region_id;
  std::unordered_map<std::string, uint64_t> counts;
  uint64_t record_count = 0;
};

// tally one record's tokens (multiple occurrences all count)
void bow_add(BowModel& model, const std::vector<std::string>& tokens);

BowModel build_bow(std::string region_id,
                   const std::vector<std::vector<std::string>>& token_lists);

// key-wise count sum; record counts add. Region ids must agree.
BowModel merge(const BowModel& a, const BowModel& b);

// Keep the k largest counts; ties at the cutoff break by ascending token
// order so the result is independent of map iteration order.
BowModel trim_top_k(const BowModel& model, uint64_t k);

// Frequency-scaled model: weight(token) = count / record_count. Counts are
// kept so serialization round-trips bit-exactly. token_cap records the trim
// cap the model was built with; it is metadata and excluded from equality.
struct NormalizedBow {
  std::string region_id;
  uint64_t record_count = 0;
  uint64_t token_cap = 0;
  std::unordered_map<std::string, uint64_t> counts;
  double norm2_full = 0.0;  // sum of squared weights, token-sorted accumulation

  double weight(uint64_t count) const {
    return static_cast<double>(count) / static_cast<double>(record_count);
  }
};

bool operator==(const NormalizedBow& a, const NormalizedBow& b);

// record_count must be >= 1
NormalizedBow normalize(const BowModel& model, uint64_t token_cap);

// Snapshot format, human-inspectable: a tab-separated header line
//   geolex-bow v1 <TAB> region_id <TAB> record_count <TAB> entry_count
// then one "token<TAB>count" line per entry, count-descending then
// token-ascending. load(save(m)) == m.
void save_snapshot(const NormalizedBow& model, const std::filesystem::path& path);
NormalizedBow load_snapshot(const std::filesystem::path& path);

// Deterministic per-capita record subsampling keys: a record is retained if
// its key ranks among the region's quota smallest. Exposed for the ingest
// driver and tests.
uint64_t subsample_key(uint64_t seed, const std::string& region_id,
                       const std::string& record_key);

}  // namespace geolex
