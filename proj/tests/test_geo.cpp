#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <string>

#include "geolex/geo.hpp"
#include "geolex/util.hpp"

using namespace geolex;

namespace {

std::filesystem::path data_dir() { return GEOLEX_DATA_DIR; }

// independent check: spherical law of cosines
double slc_km(const GeoPoint& p, const GeoPoint& q, double radius) {
  constexpr double d2r = M_PI / 180.0;
  double c = std::sin(p.lat * d2r) * std::sin(q.lat * d2r) +
             std::cos(p.lat * d2r) * std::cos(q.lat * d2r) *
                 std::cos((q.lon - p.lon) * d2r);
  return radius * std::acos(std::clamp(c, -1.0, 1.0));
}

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  auto p = std::filesystem::temp_directory_path() / name;
  write_text_file(p, content);
  return p;
}

}  // namespace

TEST_CASE("haversine fixed points") {
  GeoPoint la{34.0522, -118.2437};
  GeoPoint boston{42.3601, -71.0589};
  double d = haversine_km(la, boston);
  CHECK(d == doctest::Approx(4169.607204).epsilon(1e-6));
  CHECK(std::abs(d - slc_km(la, boston, 6371.0)) < 0.1);

  CHECK(haversine_km({0, 0}, {0, 180}) ==
        doctest::Approx(M_PI * 6371.0).epsilon(1e-12));
  CHECK(haversine_km({12.5, -33.25}, {12.5, -33.25}) == 0.0);
  CHECK(haversine_km({90, 0}, {-90, 0}) == doctest::Approx(M_PI * 6371.0).epsilon(1e-12));
}

TEST_CASE("haversine agrees with an independent oracle on random points") {
  std::mt19937_64 rng(20260817);
  std::uniform_real_distribution<double> ulat(-90.0, 90.0);
  std::uniform_real_distribution<double> ulon(-180.0, 180.0);
  for (int i = 0; i < 300; ++i) {
    GeoPoint p{ulat(rng), ulon(rng)};
    GeoPoint q{ulat(rng), ulon(rng)};
    double d = haversine_km(p, q);
    CHECK(std::abs(d - slc_km(p, q, 6371.0)) < 0.1);
    CHECK(d >= 0.0);
    CHECK(d <= M_PI * 6371.0 + 1e-9);
    CHECK(haversine_km(q, p) == doctest::Approx(d).epsilon(1e-12));
    CHECK(haversine_km(p, p) == 0.0);
  }
}

TEST_CASE("haversine respects the earth model radius") {
  EarthModel unit{1.0};
  CHECK(haversine_km({0, 0}, {0, 180}, unit) == doctest::Approx(M_PI).epsilon(1e-12));
  EarthModel big{6371.0 * 2};
  CHECK(haversine_km({0, 0}, {0, 90}, big) ==
        doctest::Approx(M_PI * 6371.0).epsilon(1e-12));
}

TEST_CASE("point validation") {
  CHECK(valid_point(0, 0));
  CHECK(valid_point(-90, -180));
  CHECK(valid_point(90, 180));
  CHECK(!valid_point(95, 0));
  CHECK(!valid_point(0, 181));
  CHECK(!valid_point(std::nan(""), 0));
  CHECK(!valid_point(0, std::numeric_limits<double>::infinity()));
}

TEST_CASE("region assignment is first-match with half-open boxes") {
  Region a{"a", "A", 32.5, 33.0, -117.5, -117.0, 100, {32.75, -117.25}};
  Region b{"b", "B", 32.0, 34.0, -118.0, -116.0, 100, {33.0, -117.0}};
  std::vector<Region> regions{a, b};

  CHECK(assign_region({32.714, -117.16}, regions) == 0);  // inside both, first wins
  CHECK(assign_region({33.5, -117.5}, regions) == 1);
  CHECK(assign_region({50.0, 0.0}, regions) == -1);
  // max edges are exclusive, min edges inclusive
  CHECK(assign_region({33.0, -117.5}, std::vector<Region>{a}) == -1);
  CHECK(assign_region({32.5, -117.5}, std::vector<Region>{a}) == 0);
  CHECK(assign_region({32.9, -117.0}, std::vector<Region>{a}) == -1);
}

TEST_CASE("bundled region config loads and is self-consistent") {
  auto regions = load_regions(data_dir() / "us70_regions.json");
  REQUIRE(regions.size() == 70);
  for (size_t i = 0; i < regions.size(); ++i) {
    CAPTURE(regions[i].id);
    CHECK(regions[i].population >= 1);
    CHECK(regions[i].min_lat < regions[i].max_lat);
    CHECK(regions[i].min_lon < regions[i].max_lon);
    CHECK(regions[i].contains(regions[i].centroid));
    // boxes do not overlap, so every centroid assigns to its own region
    CHECK(assign_region(regions[i].centroid, regions) == static_cast<int>(i));
    for (size_t j = 0; j < i; ++j) {
      CHECK(regions[i].id != regions[j].id);
    }
  }
}

TEST_CASE("region config validation rejects bad input") {
  CHECK_THROWS_AS(load_regions(data_dir() / "no_such_regions.json"), ConfigError);

  auto bad_json = write_temp("geolex_regions_bad1.json", "{not json");
  CHECK_THROWS_AS(load_regions(bad_json), ConfigError);

  auto dup = write_temp("geolex_regions_dup.json", R"({"regions":[
    {"id":"x","name":"X","min_lat":0,"max_lat":1,"min_lon":0,"max_lon":1,"population":10},
    {"id":"x","name":"X2","min_lat":2,"max_lat":3,"min_lon":2,"max_lon":3,"population":10}
  ]})");
  CHECK_THROWS_AS(load_regions(dup), ConfigError);

  auto inverted = write_temp("geolex_regions_inv.json", R"({"regions":[
    {"id":"x","name":"X","min_lat":1,"max_lat":0,"min_lon":0,"max_lon":1,"population":10}
  ]})");
  CHECK_THROWS_AS(load_regions(inverted), ConfigError);

  auto no_pop = write_temp("geolex_regions_nopop.json", R"({"regions":[
    {"id":"x","name":"X","min_lat":0,"max_lat":1,"min_lon":0,"max_lon":1}
  ]})");
  CHECK_THROWS_AS(load_regions(no_pop), ConfigError);

  auto zero_pop = write_temp("geolex_regions_zeropop.json", R"({"regions":[
    {"id":"x","name":"X","min_lat":0,"max_lat":1,"min_lon":0,"max_lon":1,"population":0}
  ]})");
  CHECK_THROWS_AS(load_regions(zero_pop), ConfigError);

  auto bad_centroid = write_temp("geolex_regions_cent.json", R"({"regions":[
    {"id":"x","name":"X","min_lat":0,"max_lat":1,"min_lon":0,"max_lon":1,
     "population":10,"centroid_lat":5,"centroid_lon":0.5}
  ]})");
  CHECK_THROWS_AS(load_regions(bad_centroid), ConfigError);

  auto bad_id = write_temp("geolex_regions_badid.json", R"({"regions":[
    {"id":"a/b","name":"X","min_lat":0,"max_lat":1,"min_lon":0,"max_lon":1,"population":10}
  ]})");
  CHECK_THROWS_AS(load_regions(bad_id), ConfigError);
}

TEST_CASE("region config accepts a bare array and defaults the centroid") {
  auto bare = write_temp("geolex_regions_bare.json", R"([
    {"id":"only","name":"Only","min_lat":10,"max_lat":12,"min_lon":20,"max_lon":24,"population":5}
  ])");
  auto regions = load_regions(bare);
  REQUIRE(regions.size() == 1);
  CHECK(regions[0].centroid.lat == doctest::Approx(11.0));
  CHECK(regions[0].centroid.lon == doctest::Approx(22.0));
}
