#include "geolex/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include <json.hpp>

#include "geolex/util.hpp"

namespace geolex {

bool valid_point(double lat, double lon) {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 &&
         lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

double haversine_km(const GeoPoint& p, const GeoPoint& q, const EarthModel& earth) {
  constexpr double rad = std::numbers::pi / 180.0;
  const double dphi = (q.lat - p.lat) * rad;
  const double dlam = (q.lon - p.lon) * rad;
  const double sp = std::sin(dphi / 2.0);
  const double sl = std::sin(dlam / 2.0);
  double a = sp * sp + std::cos(p.lat * rad) * std::cos(q.lat * rad) * sl * sl;
  a = std::clamp(a, 0.0, 1.0);
  return 2.0 * earth.radius_km * std::asin(std::sqrt(a));
}

int assign_region(const GeoPoint& p, const std::vector<Region>& regions) {
  for (size_t i = 0; i < regions.size(); ++i)
    if (regions[i].contains(p)) return static_cast<int>(i);
  return -1;
}

namespace {

double require_number(const nlohmann::json& obj, const char* key,
                      const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number())
    throw ConfigError(where + ": missing or non-numeric field \"" + key + "\"");
  return it->get<double>();
}

bool valid_id(const std::string& id) {
  if (id.empty()) return false;
  for (char c : id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

std::vector<Region> load_regions(const std::filesystem::path& path) {
  nlohmann::json doc = nlohmann::json::parse(read_text_file(path), nullptr, false);
  if (doc.is_discarded())
    throw ConfigError("region config is not valid JSON: " + path.string());

  const nlohmann::json* arr = nullptr;
  if (doc.is_array()) {
    arr = &doc;
  } else if (doc.is_object() && doc.contains("regions") && doc["regions"].is_array()) {
    arr = &doc["regions"];
  } else {
    throw ConfigError("region config must be an array or {\"regions\": [...]}: " +
                      path.string());
  }

  std::vector<Region> regions;
  std::unordered_set<std::string> seen;
  for (size_t i = 0; i < arr->size(); ++i) {
    const nlohmann::json& obj = (*arr)[i];
    const std::string where = path.string() + " region #" + std::to_string(i);
    if (!obj.is_object()) throw ConfigError(where + ": not an object");

    Region r;
    auto id_it = obj.find("id");
    if (id_it == obj.end() || !id_it->is_string())
      throw ConfigError(where + ": missing string field \"id\"");
    r.id = id_it->get<std::string>();
    if (!valid_id(r.id))
      throw ConfigError(where + ": id must match [A-Za-z0-9_.-]+, got \"" + r.id + "\"");
    if (!seen.insert(r.id).second)
      throw ConfigError(where + ": duplicate region id \"" + r.id + "\"");

    auto name_it = obj.find("name");
    if (name_it == obj.end() || !name_it->is_string())
      throw ConfigError(where + ": missing string field \"name\"");
    r.name = name_it->get<std::string>();

    r.min_lat = require_number(obj, "min_lat", where);
    r.max_lat = require_number(obj, "max_lat", where);
    r.min_lon = require_number(obj, "min_lon", where);
    r.max_lon = require_number(obj, "max_lon", where);

    auto pop_it = obj.find("population");
    if (pop_it == obj.end() || !pop_it->is_number_integer())
      throw ConfigError(where + ": missing integer field \"population\"");
    r.population = pop_it->get<long long>();
    if (r.population < 1) throw ConfigError(where + ": population must be >= 1");

    if (!valid_point(r.min_lat, r.min_lon) || !valid_point(r.max_lat, r.max_lon))
      throw ConfigError(where + ": box coordinates outside valid lat/lon ranges");
    if (!(r.min_lat < r.max_lat) || !(r.min_lon < r.max_lon))
      throw ConfigError(where + ": box must have min_lat < max_lat and min_lon < max_lon");

    r.centroid.lat = obj.contains("centroid_lat")
                         ? require_number(obj, "centroid_lat", where)
                         : (r.min_lat + r.max_lat) / 2.0;
    r.centroid.lon = obj.contains("centroid_lon")
                         ? require_number(obj, "centroid_lon", where)
                         : (r.min_lon + r.max_lon) / 2.0;
    if (!r.contains(r.centroid))
      throw ConfigError(where + ": centroid lies outside the box");

    regions.push_back(std::move(r));
  }
  return regions;
}

}  // namespace geolex
