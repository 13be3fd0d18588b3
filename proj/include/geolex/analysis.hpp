#pragma once

#include <cstdint>
#include <vector>

namespace geolex {

struct Observation {
  double distance_km = 0.0;
  double similarity = 0.0;
};

using ObservationList = std::vector<Observation>;

// Unweighted concatenation of per-region similarity functions into one
// distance/similarity scatter. Each unordered region pair appears twice,
// once per orientation. Throws DataError when no functions are given.
ObservationList aggregate(const std::vector<ObservationList>& functions);

struct BinMean {
  double bin_start_km = 0.0;
  double mean_similarity = 0.0;  // NaN when the bin is empty
  uint64_t count = 0;
};

// Fixed-width distance histogram of mean similarity. An observation at
// distance d lands in bin floor(d / width) (start-inclusive, end-exclusive).
// Bins are contiguous from 0 through the last occupied one; empty bins in
// between are emitted with count 0 and NaN mean.
std::vector<BinMean> bin_means(const ObservationList& obs, double bin_width_km);

struct DecayRow {
  double bin_start_km = 0.0;
  double mean_similarity = 0.0;  // NaN for empty bins
  double delta_s = 0.0;          // fraction, NaN for empty bins
  double cum_delta_s = 0.0;      // additive running sum, NaN for empty bins
  uint64_t pair_count = 0;
};

// Proportional similarity drop per bin: the first non-empty row gets
// delta_s 0, each later non-empty row compares against the nearest
// preceding non-empty mean, and cum_delta_s accumulates the deltas.
// Throws DataError when every bin is empty.
std::vector<DecayRow> decay_table(const std::vector<BinMean>& bins);

struct TrendFit {
  double slope = 0.0;      // similarity per km
  double intercept = 0.0;  // similarity at distance 0
  double r_value = 0.0;    // Pearson correlation
};

// Ordinary least squares of similarity on distance. Needs at least two
// observations spanning at least two distinct distances; otherwise throws
// DataError. r_value is 0 when the similarities are all equal.
TrendFit linear_fit(const ObservationList& obs);

}  // namespace geolex
