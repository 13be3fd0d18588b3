#include "geolex/analysis.hpp"

#include <cmath>
#include <limits>

#include "geolex/util.hpp"

namespace geolex {

ObservationList aggregate(const std::vector<ObservationList>& functions) {
  if (functions.empty()) throw DataError("no similarity functions to aggregate");
  ObservationList out;
  size_t total = 0;
  for (const auto& f : functions) total += f.size();
  out.reserve(total);
  for (const auto& f : functions) out.insert(out.end(), f.begin(), f.end());
  return out;
}

std::vector<BinMean> bin_means(const ObservationList& obs, double bin_width_km) {
  if (!(bin_width_km > 0.0) || !std::isfinite(bin_width_km)) {
    throw ConfigError("bin width must be a positive finite number");
  }
  std::vector<double> sums;
  std::vector<uint64_t> counts;
  for (const auto& o : obs) {
    auto bin = static_cast<size_t>(std::floor(o.distance_km / bin_width_km));
    if (bin >= counts.size()) {
      sums.resize(bin + 1, 0.0);
      counts.resize(bin + 1, 0);
    }
    sums[bin] += o.similarity;
    ++counts[bin];
  }
  std::vector<BinMean> out(counts.size());
  for (size_t b = 0; b < counts.size(); ++b) {
    out[b].bin_start_km = static_cast<double>(b) * bin_width_km;
    out[b].count = counts[b];
    out[b].mean_similarity = counts[b] > 0
                                 ? sums[b] / static_cast<double>(counts[b])
                                 : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

std::vector<DecayRow> decay_table(const std::vector<BinMean>& bins) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<DecayRow> out;
  out.reserve(bins.size());
  double prev_mean = nan;  // nearest preceding non-empty mean
  double cum = 0.0;
  bool any = false;
  for (const auto& b : bins) {
    DecayRow row;
    row.bin_start_km = b.bin_start_km;
    row.pair_count = b.count;
    if (b.count == 0) {
      row.mean_similarity = nan;
      row.delta_s = nan;
      row.cum_delta_s = nan;
      out.push_back(row);
      continue;
    }
    row.mean_similarity = b.mean_similarity;
    if (!any) {
      row.delta_s = 0.0;
    } else if (prev_mean == 0.0) {
      // no drop is measurable from a zero baseline
      row.delta_s = 0.0;
    } else {
      row.delta_s = (prev_mean - b.mean_similarity) / prev_mean;
    }
    cum += row.delta_s;
    row.cum_delta_s = cum;
    prev_mean = b.mean_similarity;
    any = true;
    out.push_back(row);
  }
  if (!any) throw DataError("every distance bin is empty");
  return out;
}

TrendFit linear_fit(const ObservationList& obs) {
  if (obs.size() < 2) throw DataError("need at least two observations for a trend fit");
  double mx = 0.0, my = 0.0;
  for (const auto& o : obs) {
    mx += o.distance_km;
    my += o.similarity;
  }
  mx /= static_cast<double>(obs.size());
  my /= static_cast<double>(obs.size());

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& o : obs) {
    double dx = o.distance_km - mx;
    double dy = o.similarity - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DataError("trend fit needs at least two distinct distances");

  TrendFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_value = syy == 0.0 ? 0.0 : sxy / std::sqrt(sxx * syy);
  return fit;
}

}  // namespace geolex
