#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace geolex {

// Planted-gradient corpus: regions sit on the equator at fixed spacing, each
// drawing tokens from a shared core vocabulary plus a region-local usage
// field whose correlation falls off linearly with region lag at a rate set
// by `gradient`. noise_fraction of all token slots are junk drawn uniformly
// from a large disjoint vocabulary.
struct SynthParams {
  uint32_t n_regions = 20;
  double spacing_km = 500.0;
  uint32_t vocab_core = 500;
  uint32_t vocab_local = 500;
  double gradient = 1.0;        // in [0,1]; 0 plants no signal
  double noise_fraction = 0.0;  // in [0,1]
  uint32_t records_per_region = 1000;
  uint64_t seed = 0;
  uint32_t tokens_per_record = 12;
  double core_share = 0.35;  // probability mass of the core vocabulary
  double sigma = 1.5;        // log-amplitude of the local usage field
};

struct SynthOutputs {
  std::filesystem::path regions_path;
  std::vector<std::filesystem::path> corpus_paths;  // one JSONL per region
};

// Writes <out_dir>/regions.json and <out_dir>/corpus/<region>.jsonl.
// Byte-identical for identical params. Throws ConfigError on out-of-range
// parameters.
SynthOutputs generate_synthetic_corpus(const SynthParams& params,
                                       const std::filesystem::path& out_dir);

// Closed-form expectation of the shared-token cosine between two regions
// `lag` steps apart, ignoring sampling and junk noise. This is the oracle
// the generator is tested against: similarity at lag 0 is 1 and decays to a
// positive floor set by the core vocabulary share.
double synth_expected_similarity(const SynthParams& params, uint32_t lag);

// Rational-approximation inverse of the standard normal CDF (Acklam's
// method, |error| < 1.2e-9). Exposed for direct testing; p must be in (0,1).
double inverse_normal_cdf(double p);

}  // namespace geolex
