#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace geolex {

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
};

bool valid_point(double lat, double lon);

struct EarthModel {
  double radius_km = 6371.0;
};

struct Region {
  std::string id;
  std::string name;
  double min_lat = 0.0, max_lat = 0.0;
  double min_lon = 0.0, max_lon = 0.0;
  long long population = 0;
  GeoPoint centroid;

  // min-inclusive, max-exclusive on both axes
  bool contains(const GeoPoint& p) const {
    return p.lat >= min_lat && p.lat < max_lat && p.lon >= min_lon && p.lon < max_lon;
  }
};

// Config file: JSON object {"regions": [...]} (or a bare array), each entry
// with "id", "name", "min_lat", "max_lat", "min_lon", "max_lon",
// "population", optional "centroid_lat"/"centroid_lon" (default box center).
// Order is preserved; it decides overlap ties in assign_region.
std::vector<Region> load_regions(const std::filesystem::path& path);

// Index of the first region (config order) whose box contains the point,
// -1 when none does.
int assign_region(const GeoPoint& p, const std::vector<Region>& regions);

// Great-circle distance via the haversine identity; the arcsin argument is
// clamped to [0,1] to absorb floating-point excess.
double haversine_km(const GeoPoint& p, const GeoPoint& q, const EarthModel& earth = {});

}  // namespace geolex
