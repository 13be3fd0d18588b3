#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "geolex/bow.hpp"
#include "geolex/geo.hpp"
#include "geolex/ingest.hpp"
#include "geolex/similarity.hpp"
#include "geolex/synth.hpp"
#include "geolex/text.hpp"
#include "geolex/util.hpp"

using namespace geolex;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SynthParams small_params() {
  SynthParams p;
  p.n_regions = 4;
  p.vocab_core = 50;
  p.vocab_local = 50;
  p.records_per_region = 30;
  p.tokens_per_record = 8;
  p.seed = 3;
  return p;
}

}  // namespace

TEST_CASE("inverse normal cdf") {
  CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963985).epsilon(1e-6));
  CHECK(inverse_normal_cdf(0.8413447461) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(inverse_normal_cdf(0.0013498980) == doctest::Approx(-3.0).epsilon(1e-5));

  // antisymmetry about the median
  for (double p : {0.01, 0.1, 0.25, 0.45}) {
    CHECK(inverse_normal_cdf(p) ==
          doctest::Approx(-inverse_normal_cdf(1.0 - p)).epsilon(1e-8));
  }

  // strictly increasing
  double prev = inverse_normal_cdf(1e-6);
  for (double p = 1e-3; p < 1.0; p += 1e-3) {
    double q = inverse_normal_cdf(p);
    CHECK(q > prev);
    prev = q;
  }

  CHECK_THROWS_AS(inverse_normal_cdf(0.0), ConfigError);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), ConfigError);
  CHECK_THROWS_AS(inverse_normal_cdf(-0.5), ConfigError);
}

TEST_CASE("expected similarity oracle") {
  SynthParams p;  // defaults: 20 regions, gradient 1, core share 0.35, sigma 1.5

  CHECK(synth_expected_similarity(p, 0) == doctest::Approx(1.0).epsilon(1e-12));

  // decreasing in lag, bounded below by the core floor
  double prev = 1.0;
  for (uint32_t lag = 1; lag < p.n_regions; ++lag) {
    double s = synth_expected_similarity(p, lag);
    CHECK(s < prev);
    CHECK(s > 0.0);
    prev = s;
  }

  SUBCASE("no gradient means no decay") {
    SynthParams flat = p;
    flat.gradient = 0.0;
    for (uint32_t lag : {0u, 1u, 5u, 19u}) {
      CHECK(synth_expected_similarity(flat, lag) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  SUBCASE("pure-local vocabulary with full gradient decays hard") {
    SynthParams hard = p;
    hard.core_share = 0.0;
    // with correlation rho between the two usage fields the cosine is
    // exp(sigma^2 (rho - 1)); at full decorrelation that is exp(-sigma^2)
    double floor = synth_expected_similarity(hard, p.n_regions - 1);
    CHECK(floor == doctest::Approx(std::exp(-hard.sigma * hard.sigma)).epsilon(1e-9));
  }
}

TEST_CASE("generation is byte-identical across runs") {
  auto d1 = fresh_dir("geolex_synth_bytes1");
  auto d2 = fresh_dir("geolex_synth_bytes2");
  auto p = small_params();
  auto o1 = generate_synthetic_corpus(p, d1);
  auto o2 = generate_synthetic_corpus(p, d2);

  CHECK(slurp(o1.regions_path) == slurp(o2.regions_path));
  REQUIRE(o1.corpus_paths.size() == p.n_regions);
  REQUIRE(o2.corpus_paths.size() == p.n_regions);
  for (size_t i = 0; i < o1.corpus_paths.size(); ++i) {
    CHECK(slurp(o1.corpus_paths[i]) == slurp(o2.corpus_paths[i]));
  }

  SUBCASE("and the seed actually matters") {
    auto d3 = fresh_dir("geolex_synth_bytes3");
    auto p2 = p;
    p2.seed = p.seed + 1;
    auto o3 = generate_synthetic_corpus(p2, d3);
    CHECK(slurp(o1.corpus_paths[0]) != slurp(o3.corpus_paths[0]));
  }
}

TEST_CASE("generated regions are loadable and self-consistent") {
  auto dir = fresh_dir("geolex_synth_regions");
  auto p = small_params();
  auto out = generate_synthetic_corpus(p, dir);

  auto regions = load_regions(out.regions_path);
  REQUIRE(regions.size() == p.n_regions);
  EarthModel earth;
  for (size_t i = 0; i < regions.size(); ++i) {
    // each centroid falls inside its own box and nobody else claims it first
    CHECK(assign_region(regions[i].centroid, regions) == static_cast<int>(i));
    if (i > 0) {
      double d = haversine_km(regions[i - 1].centroid, regions[i].centroid, earth);
      CHECK(d == doctest::Approx(p.spacing_km).epsilon(1e-6));
    }
  }

  SUBCASE("corpus lines parse as valid english records inside their region") {
    for (size_t i = 0; i < out.corpus_paths.size(); ++i) {
      std::ifstream in(out.corpus_paths[i]);
      std::string line;
      size_t lines = 0;
      while (std::getline(in, line)) {
        RawRecord r;
        REQUIRE(parse_record(line, r) == ParseStatus::ok);
        CHECK(r.lang == "en");
        CHECK(assign_region(r.point, regions) == static_cast<int>(i));
        ++lines;
      }
      CHECK(lines == p.records_per_region);
    }
  }
}

TEST_CASE("invalid generator parameters are rejected") {
  auto dir = fresh_dir("geolex_synth_invalid");
  auto reject = [&](auto mutate) {
    SynthParams p = small_params();
    mutate(p);
    CHECK_THROWS_AS(generate_synthetic_corpus(p, dir), ConfigError);
  };
  reject([](SynthParams& p) { p.n_regions = 1; });
  reject([](SynthParams& p) { p.spacing_km = 0.0; });
  reject([](SynthParams& p) { p.vocab_core = 0; });
  reject([](SynthParams& p) { p.gradient = 1.5; });
  reject([](SynthParams& p) { p.gradient = -0.1; });
  reject([](SynthParams& p) { p.noise_fraction = 2.0; });
  reject([](SynthParams& p) { p.records_per_region = 0; });
  reject([](SynthParams& p) { p.tokens_per_record = 0; });
  reject([](SynthParams& p) { p.core_share = 1.0; });
  reject([](SynthParams& p) { p.sigma = 0.0; });
  // the ring of regions must fit on the sphere
  reject([](SynthParams& p) {
    p.n_regions = 100;
    p.spacing_km = 450.0;
  });
}

TEST_CASE("empirical similarity tracks the analytic expectation") {
  // The closed form assumes every token shows up in both samples. With a
  // large sigma the rarest tokens routinely miss one side, and dropping
  // them from the shared set biases the estimate upward. sigma 1 and 60k
  // tokens per region keep the worst token's expected count near 8, which
  // makes absences (and hence the bias) negligible next to the tolerance.
  SynthParams p;
  p.n_regions = 5;
  p.spacing_km = 400.0;
  p.vocab_core = 150;
  p.vocab_local = 150;
  p.gradient = 1.0;
  p.noise_fraction = 0.0;
  p.records_per_region = 5000;
  p.tokens_per_record = 12;
  p.seed = 7;
  p.sigma = 1.0;

  auto dir = fresh_dir("geolex_synth_empirical");
  auto out = generate_synthetic_corpus(p, dir);
  auto regions = load_regions(out.regions_path);

  // the generator writes plain lowercase tokens, so an empty stopword set
  // keeps preprocessing out of the comparison
  StopwordSet no_stop;
  IngestOptions opt;
  opt.workers = 2;
  auto res = ingest_corpus(out.corpus_paths, regions, no_stop, opt);
  REQUIRE(res.models.size() == p.n_regions);
  REQUIRE(res.counters.assigned == uint64_t(p.n_regions) * p.records_per_region);
  REQUIRE(res.counters.errors == 0);

  std::vector<NormalizedBow> snapshots;
  for (auto& m : res.models) snapshots.push_back(normalize(trim_top_k(m, 5000), 5000));

  auto pairs = all_pairs(snapshots, regions);
  REQUIRE(pairs.size() == 10);

  std::map<uint32_t, std::vector<double>> by_lag;
  for (const auto& pr : pairs) {
    uint32_t lag = uint32_t(std::lround(pr.distance_km / p.spacing_km));
    by_lag[lag].push_back(pr.similarity);
  }
  REQUIRE(by_lag.size() == 4);

  for (auto& [lag, sims] : by_lag) {
    double mean = 0;
    for (double s : sims) mean += s;
    mean /= double(sims.size());
    double expect = synth_expected_similarity(p, lag);
    INFO("lag ", lag, " mean ", mean, " expected ", expect);
    CHECK(std::fabs(mean - expect) < 0.05);
  }
}

TEST_CASE("similarity falls monotonically with lag on a planted gradient") {
  SynthParams p;
  p.n_regions = 11;
  p.spacing_km = 100.0;
  p.vocab_core = 150;
  p.vocab_local = 150;
  p.gradient = 1.0;
  p.noise_fraction = 0.1;
  p.records_per_region = 1500;
  p.seed = 21;

  auto dir = fresh_dir("geolex_synth_monotone");
  auto out = generate_synthetic_corpus(p, dir);
  auto regions = load_regions(out.regions_path);

  StopwordSet no_stop;
  IngestOptions opt;
  opt.workers = 2;
  auto res = ingest_corpus(out.corpus_paths, regions, no_stop, opt);
  std::vector<NormalizedBow> snapshots;
  for (auto& m : res.models) snapshots.push_back(normalize(trim_top_k(m, 5000), 5000));
  auto pairs = all_pairs(snapshots, regions);

  // group by lag directly rather than by distance bin so that floating
  // point at bin edges cannot blur adjacent lags together
  std::map<uint32_t, std::pair<double, size_t>> acc;
  for (const auto& pr : pairs) {
    uint32_t lag = uint32_t(std::lround(pr.distance_km / p.spacing_km));
    acc[lag].first += pr.similarity;
    acc[lag].second += 1;
  }
  REQUIRE(acc.size() == 10);
  double prev = 2.0;
  for (auto& [lag, sum_n] : acc) {
    double mean = sum_n.first / double(sum_n.second);
    INFO("lag ", lag, " mean similarity ", mean);
    CHECK(mean < prev);
    prev = mean;
  }
}
