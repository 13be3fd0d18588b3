#include "geolex/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include <json.hpp>

#include "geolex/util.hpp"

namespace geolex {

namespace {

constexpr uint32_t kWindow = 1000;  // seeds per usage-field window
constexpr double kEarthRadiusKm = 6371.0;

// Zipf-ish core profile; the offset keeps the head from dwarfing everything.
double core_profile(uint32_t k) { return std::pow(static_cast<double>(k) + 2.7, -1.05); }

// Per-step window shift. gradient 0 means every region reads the identical
// window; any positive gradient shifts by at least one seed per step.
uint32_t window_shift(const SynthParams& p) {
  if (p.gradient == 0.0) return 0;
  double raw = p.gradient * static_cast<double>(kWindow) /
               static_cast<double>(p.n_regions - 1);
  return std::max<uint32_t>(1, static_cast<uint32_t>(std::llround(raw)));
}

void validate(const SynthParams& p) {
  if (p.n_regions < 2) throw ConfigError("synth needs at least 2 regions");
  if (!(p.spacing_km > 0.0) || !std::isfinite(p.spacing_km)) {
    throw ConfigError("spacing must be a positive finite number of km");
  }
  if (p.vocab_core < 1 || p.vocab_local < 1) {
    throw ConfigError("core and local vocabulary sizes must be at least 1");
  }
  if (!(p.gradient >= 0.0 && p.gradient <= 1.0)) {
    throw ConfigError("gradient must be in [0,1]");
  }
  if (!(p.noise_fraction >= 0.0 && p.noise_fraction <= 1.0)) {
    throw ConfigError("noise fraction must be in [0,1]");
  }
  if (p.records_per_region < 1) throw ConfigError("records per region must be at least 1");
  if (p.tokens_per_record < 1) throw ConfigError("tokens per record must be at least 1");
  if (!(p.core_share >= 0.0 && p.core_share < 1.0)) {
    throw ConfigError("core share must be in [0,1)");
  }
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) {
    throw ConfigError("sigma must be a positive finite number");
  }
  double dlon = p.spacing_km / kEarthRadiusKm * 180.0 / M_PI;
  double span = dlon * static_cast<double>(p.n_regions - 1) + 0.8 * dlon;
  if (span >= 350.0) {
    throw ConfigError("regions at this count and spacing do not fit on one parallel");
  }
}

std::string region_label(uint32_t r, uint32_t n_regions) {
  int width = 2;
  for (uint32_t v = n_regions - 1; v >= 100; v /= 10) ++width;
  char buf[16];
  std::snprintf(buf, sizeof buf, "r%0*u", width, r);
  return buf;
}

std::string token_label(const char* prefix, int width, uint32_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*u", prefix, width, i);
  return buf;
}

double to_unit(uint64_t h) {
  // strict (0,1): the inverse CDF rejects the endpoints
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// field[r][t] = window mean (scaled to unit variance) of the seed chain for
// local token t, so corr(field[r], field[r+d]) = max(0, 1 - d*shift/window)
std::vector<std::vector<double>> local_fields(const SynthParams& p) {
  uint32_t s = window_shift(p);
  size_t chain = static_cast<size_t>(p.n_regions - 1) * s + kWindow;
  uint64_t field_seed = stable_hash64(p.seed, "synth-field");
  double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(kWindow));

  std::vector<std::vector<double>> field(p.n_regions, std::vector<double>(p.vocab_local));
  std::vector<double> prefix(chain + 1);
  for (uint32_t t = 0; t < p.vocab_local; ++t) {
    std::string tag = "z:" + std::to_string(t) + ":";
    prefix[0] = 0.0;
    for (size_t u = 0; u < chain; ++u) {
      uint64_t h = stable_hash64(field_seed, tag + std::to_string(u));
      prefix[u + 1] = prefix[u] + inverse_normal_cdf(to_unit(h));
    }
    for (uint32_t r = 0; r < p.n_regions; ++r) {
      size_t lo = static_cast<size_t>(r) * s;
      field[r][t] = (prefix[lo + kWindow] - prefix[lo]) * inv_sqrt;
    }
  }
  return field;
}

}  // namespace

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("inverse normal CDF input must be in (0,1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double synth_expected_similarity(const SynthParams& p, uint32_t lag) {
  validate(p);
  uint32_t s = window_shift(p);
  double rho = std::max(
      0.0, 1.0 - static_cast<double>(lag) * s / static_cast<double>(kWindow));

  double zipf_sum = 0.0;
  for (uint32_t k = 0; k < p.vocab_core; ++k) zipf_sum += core_profile(k);
  double core_sq = 0.0;  // sum of squared normalized core weights
  for (uint32_t k = 0; k < p.vocab_core; ++k) {
    double z = core_profile(k) / zipf_sum;
    core_sq += z * z;
  }

  double cs = p.core_share;
  double ls = 1.0 - cs;
  double a = cs * cs * core_sq;
  double b = ls * ls / static_cast<double>(p.vocab_local);
  double s2 = p.sigma * p.sigma;
  return (a + b * std::exp(s2 * rho)) / (a + b * std::exp(s2));
}

SynthOutputs generate_synthetic_corpus(const SynthParams& p,
                                       const std::filesystem::path& out_dir) {
  validate(p);

  double dlon = p.spacing_km / kEarthRadiusKm * 180.0 / M_PI;
  double span = dlon * static_cast<double>(p.n_regions - 1);

  auto fields = local_fields(p);

  uint32_t vocab_total = p.vocab_core + p.vocab_local;
  int core_width = 4, local_width = 4;
  for (uint32_t v = p.vocab_core; v > 10000; v /= 10) ++core_width;
  for (uint32_t v = p.vocab_local; v > 10000; v /= 10) ++local_width;
  std::vector<std::string> names(vocab_total);
  for (uint32_t k = 0; k < p.vocab_core; ++k) names[k] = token_label("core", core_width, k);
  for (uint32_t t = 0; t < p.vocab_local; ++t) {
    names[p.vocab_core + t] = token_label("loc", local_width, t);
  }
  uint64_t junk_vocab = 25ull * vocab_total;

  std::error_code ec;
  std::filesystem::create_directories(out_dir / "corpus", ec);
  if (ec) throw ConfigError("cannot create output directory: " + (out_dir / "corpus").string());

  nlohmann::json regions_doc;
  regions_doc["description"] =
      "synthetic equatorial chain, " + std::to_string(p.n_regions) + " regions at " +
      std::to_string(p.spacing_km) + " km spacing";
  regions_doc["regions"] = nlohmann::json::array();

  SynthOutputs outputs;
  double zipf_sum = 0.0;
  for (uint32_t k = 0; k < p.vocab_core; ++k) zipf_sum += core_profile(k);
  double ls_per_token = (1.0 - p.core_share) / static_cast<double>(p.vocab_local);
  double drift = p.sigma * p.sigma / 2.0;
  std::vector<double> cum(vocab_total);

  int rec_width = 6;
  for (uint32_t v = p.records_per_region; v > 1000000; v /= 10) ++rec_width;

  for (uint32_t r = 0; r < p.n_regions; ++r) {
    std::string rid = region_label(r, p.n_regions);
    double lon = -span / 2.0 + static_cast<double>(r) * dlon;

    nlohmann::json region;
    region["id"] = rid;
    region["name"] = "Synthetic region " + std::to_string(r);
    region["min_lat"] = -0.25;
    region["max_lat"] = 0.25;
    region["min_lon"] = lon - 0.4 * dlon;
    region["max_lon"] = lon + 0.4 * dlon;
    region["centroid_lat"] = 0.0;
    region["centroid_lon"] = lon;
    region["population"] = 1000000;
    regions_doc["regions"].push_back(region);

    double acc = 0.0;
    for (uint32_t k = 0; k < p.vocab_core; ++k) {
      acc += p.core_share * core_profile(k) / zipf_sum;
      cum[k] = acc;
    }
    for (uint32_t t = 0; t < p.vocab_local; ++t) {
      acc += ls_per_token * std::exp(p.sigma * fields[r][t] - drift);
      cum[p.vocab_core + t] = acc;
    }
    double total = acc;

    std::mt19937_64 eng(stable_hash64(p.seed, "rng:" + rid));
    auto u01 = [&eng] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };

    std::filesystem::path corpus_path = out_dir / "corpus" / (rid + ".jsonl");
    std::ofstream out(corpus_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write corpus file: " + corpus_path.string());

    std::string text;
    for (uint32_t i = 0; i < p.records_per_region; ++i) {
      text.clear();
      for (uint32_t slot = 0; slot < p.tokens_per_record; ++slot) {
        if (!text.empty()) text.push_back(' ');
        if (u01() < p.noise_fraction) {
          auto j = std::min<uint64_t>(junk_vocab - 1,
                                      static_cast<uint64_t>(u01() * static_cast<double>(junk_vocab)));
          text += token_label("junk", 6, static_cast<uint32_t>(j));
        } else {
          double target = u01() * total;
          auto it = std::upper_bound(cum.begin(), cum.end(), target);
          size_t idx = std::min<size_t>(vocab_total - 1,
                                        static_cast<size_t>(it - cum.begin()));
          text += names[idx];
        }
      }
      char idbuf[32];
      std::snprintf(idbuf, sizeof idbuf, "-%0*u", rec_width, i);
      nlohmann::json rec;
      rec["id"] = rid + idbuf;
      rec["lang"] = "en";
      rec["lat"] = 0.0;
      rec["lon"] = lon;
      rec["text"] = text;
      out << rec.dump() << '\n';
    }
    out.flush();
    if (!out) throw ConfigError("short write on corpus file: " + corpus_path.string());
    outputs.corpus_paths.push_back(corpus_path);
  }

  outputs.regions_path = out_dir / "regions.json";
  write_text_file(outputs.regions_path, regions_doc.dump(2) + "\n");
  return outputs;
}

}  // namespace geolex
