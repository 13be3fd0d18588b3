#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "geolex/bow.hpp"
#include "geolex/geo.hpp"

namespace geolex {

enum class CosineMode {
  shared_only,  // norms restricted to the shared token set (default)
  full_vocab,   // conventional cosine over each model's full vocabulary
};

// Tokens present in both models, ascending. Exposed because pair outputs
// report the overlap size.
std::vector<std::string> shared_tokens(const NormalizedBow& a, const NormalizedBow& b);

// Cosine similarity of the two frequency vectors. In shared_only mode both
// the dot product and the norms run over the shared token set alone, so two
// models that agree on their overlap score 1 even if their vocabularies
// differ elsewhere. Result is clamped to [0,1]; an empty overlap (or a zero
// restricted norm) scores 0. Symmetric to the last bit: accumulation order
// is the sorted shared token order for both arguments.
double cosine_similarity(const NormalizedBow& a, const NormalizedBow& b,
                         CosineMode mode = CosineMode::shared_only);

// Convenience overload for tests and small experiments; weights are used
// as-is (no record-count scaling).
using WeightMap = std::map<std::string, double>;
double cosine_similarity(const WeightMap& a, const WeightMap& b,
                         CosineMode mode = CosineMode::shared_only);

struct SimilarityPair {
  std::string region_i;  // always < region_j
  std::string region_j;
  double distance_km = 0.0;
  double similarity = 0.0;
  uint64_t shared_token_count = 0;
};

// Every unordered pair of models, ordered by (region_i, region_j). Distances
// are centroid great-circle distances taken from the matching regions.
// Throws DataError when fewer than two models are given or a model's region
// id is missing from the region list.
std::vector<SimilarityPair> all_pairs(const std::vector<NormalizedBow>& models,
                                      const std::vector<Region>& regions,
                                      CosineMode mode = CosineMode::shared_only,
                                      const EarthModel& earth = {},
                                      size_t workers = 1);

// Similarity of one model against every other, ascending by the other
// region's id. Used for the per-region profile files.
struct SimilarityObs {
  std::string other_region;
  double distance_km = 0.0;
  double similarity = 0.0;
};
std::vector<SimilarityObs> similarity_function(const NormalizedBow& focus,
                                               const std::vector<NormalizedBow>& others,
                                               const std::vector<Region>& regions,
                                               CosineMode mode = CosineMode::shared_only,
                                               const EarthModel& earth = {});

}  // namespace geolex
