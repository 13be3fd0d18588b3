#include "geolex/bow.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "geolex/util.hpp"

namespace geolex {

void bow_add(BowModel& model, const std::vector<std::string>& tokens) {
  for (const std::string& t : tokens) ++model.counts[t];
  ++model.record_count;
}

BowModel build_bow(std::string region_id,
                   const std::vector<std::vector<std::string>>& token_lists) {
  BowModel model;
  model.region_id = std::move(region_id);
  for (const auto& tokens : token_lists) bow_add(model, tokens);
  return model;
}

BowModel merge(const BowModel& a, const BowModel& b) {
  if (a.region_id != b.region_id)
    throw DataError("cannot merge models for different regions: \"" +
                    a.region_id + "\" vs \"" + b.region_id + "\"");
  BowModel out = a;
  for (const auto& [token, count] : b.counts) out.counts[token] += count;
  out.record_count += b.record_count;
  return out;
}

namespace {

// total order: count descending, then token ascending
bool entry_less(const std::pair<std::string, uint64_t>& a,
                const std::pair<std::string, uint64_t>& b) {
  if (a.second != b.second) return a.second > b.second;
  return a.first < b.first;
}

std::vector<std::pair<std::string, uint64_t>> sorted_entries(
    const std::unordered_map<std::string, uint64_t>& counts) {
  std::vector<std::pair<std::string, uint64_t>> entries(counts.begin(), counts.end());
  std::sort(entries.begin(), entries.end(), entry_less);
  return entries;
}

}  // namespace

BowModel trim_top_k(const BowModel& model, uint64_t k) {
  if (model.counts.size() <= k) return model;
  auto entries = sorted_entries(model.counts);
  BowModel out;
  out.region_id = model.region_id;
  out.record_count = model.record_count;
  out.counts.reserve(k);
  for (uint64_t i = 0; i < k; ++i) out.counts.insert(entries[i]);
  return out;
}

NormalizedBow normalize(const BowModel& model, uint64_t token_cap) {
  if (model.record_count == 0)
    throw DataError("cannot normalize an empty corpus (region \"" +
                    model.region_id + "\")");
  NormalizedBow out;
  out.region_id = model.region_id;
  out.record_count = model.record_count;
  out.token_cap = token_cap;
  out.counts = model.counts;

  // accumulate in token order so the value is independent of map layout
  std::vector<const std::pair<const std::string, uint64_t>*> items;
  items.reserve(out.counts.size());
  for (const auto& kv : out.counts) items.push_back(&kv);
  std::sort(items.begin(), items.end(),
            [](auto* a, auto* b) { return a->first < b->first; });
  double norm2 = 0.0;
  for (const auto* kv : items) {
    double w = out.weight(kv->second);
    norm2 += w * w;
  }
  out.norm2_full = norm2;
  return out;
}

bool operator==(const NormalizedBow& a, const NormalizedBow& b) {
  return a.region_id == b.region_id && a.record_count == b.record_count &&
         a.counts == b.counts;
}

void save_snapshot(const NormalizedBow& model, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "geolex-bow v1\t" << model.region_id << '\t' << model.record_count
      << '\t' << model.counts.size() << '\n';
  for (const auto& [token, count] : sorted_entries(model.counts))
    out << token << '\t' << count << '\n';
  write_text_file(path, out.str());
}

namespace {

uint64_t parse_u64_field(std::string_view s, const std::string& where) {
  uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DataError(where + ": bad integer field \"" + std::string(s) + "\"");
  return v;
}

}  // namespace

NormalizedBow load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open snapshot: " + path.string());
  const std::string where = "snapshot " + path.string();

  std::string header;
  if (!std::getline(in, header)) throw DataError(where + ": empty file");
  if (!header.empty() && header.back() == '\r') header.pop_back();

  std::vector<std::string_view> fields;
  {
    std::string_view rest = header;
    while (true) {
      size_t tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
  }
  if (fields.empty() || fields[0] != "geolex-bow v1")
    throw DataError(where + ": unsupported snapshot version \"" +
                    std::string(fields.empty() ? "" : fields[0]) + "\"");
  if (fields.size() != 4)
    throw DataError(where + ": malformed header");

  BowModel model;
  model.region_id = std::string(fields[1]);
  model.record_count = parse_u64_field(fields[2], where);
  const uint64_t entry_count = parse_u64_field(fields[3], where);

  std::string line;
  uint64_t read_entries = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw DataError(where + ": malformed entry line \"" + line + "\"");
    std::string token = line.substr(0, tab);
    uint64_t count = parse_u64_field(std::string_view(line).substr(tab + 1), where);
    if (count == 0) throw DataError(where + ": zero count for \"" + token + "\"");
    if (!model.counts.emplace(std::move(token), count).second)
      throw DataError(where + ": duplicate token entry");
    ++read_entries;
  }
  if (read_entries != entry_count)
    throw DataError(where + ": truncated snapshot, header promises " +
                    std::to_string(entry_count) + " entries but file has " +
                    std::to_string(read_entries));
  return normalize(model, entry_count);
}

uint64_t subsample_key(uint64_t seed, const std::string& region_id,
                       const std::string& record_key) {
  std::string material;
  material.reserve(region_id.size() + record_key.size() + 1);
  material.append(region_id);
  material.push_back('\x1f');
  material.append(record_key);
  return stable_hash64(seed, material);
}

}  // namespace geolex
