#include "geolex/ingest.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <queue>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "geolex/util.hpp"

namespace geolex {

namespace {

bool is_blank(std::string_view s) {
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// optional metadata: strings pass through, numbers are stringified, anything
// else is ignored
std::string loose_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  return {};
}

}  // namespace

ParseStatus parse_record(std::string_view line, RawRecord& out) {
  nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return ParseStatus::malformed;

  auto text_it = doc.find("text");
  if (text_it == doc.end() || !text_it->is_string()) return ParseStatus::missing_field;
  std::string text = text_it->get<std::string>();
  if (is_blank(text)) return ParseStatus::missing_field;

  auto lat_it = doc.find("lat");
  auto lon_it = doc.find("lon");
  if (lat_it == doc.end() || lon_it == doc.end() || !lat_it->is_number() ||
      !lon_it->is_number()) {
    return ParseStatus::missing_field;
  }
  double lat = lat_it->get<double>();
  double lon = lon_it->get<double>();
  if (!valid_point(lat, lon)) return ParseStatus::out_of_range;

  out.text = std::move(text);
  out.point = GeoPoint{lat, lon};
  out.id.clear();
  out.created_at.clear();
  out.lang.clear();
  if (auto it = doc.find("id"); it != doc.end()) out.id = loose_string(*it);
  if (auto it = doc.find("created_at"); it != doc.end() && it->is_string()) {
    out.created_at = it->get<std::string>();
  }
  if (auto it = doc.find("lang"); it != doc.end() && it->is_string()) {
    out.lang = it->get<std::string>();
    for (char& c : out.lang) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return ParseStatus::ok;
}

bool is_english(const RawRecord& record, const StopwordSet& stopwords) {
  if (!record.lang.empty()) return record.lang == "en";

  uint64_t codepoints = 0;
  uint64_t plain_ascii = 0;
  bool has_stopword = false;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) {
      if (!has_stopword && stopwords.count(token)) has_stopword = true;
      token.clear();
    }
  };
  for (unsigned char c : record.text) {
    if ((c & 0xC0) != 0x80) ++codepoints;  // everything but UTF-8 continuations
    if (c == '\t' || c == '\n' || c == '\r' || (c >= 0x20 && c <= 0x7E)) ++plain_ascii;
    if (std::isalnum(c) && c < 0x80) {
      token.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return has_stopword && plain_ascii * 5 >= codepoints * 3;
}

namespace {

// candidate for per-capita subsampling; ordering key is globally unique so
// selection is total and independent of sharding
struct Sample {
  uint64_t key = 0;
  size_t file_idx = 0;
  uint64_t line_no = 0;
  std::vector<std::string> tokens;
};

struct SampleWorse {
  bool operator()(const Sample& a, const Sample& b) const {
    return std::tie(a.key, a.file_idx, a.line_no) < std::tie(b.key, b.file_idx, b.line_no);
  }
};

using SampleHeap = std::priority_queue<Sample, std::vector<Sample>, SampleWorse>;

struct WorkerState {
  IngestCounters counters;
  std::vector<uint64_t> region_records;
  std::vector<BowModel> partials;   // scaling off
  std::vector<SampleHeap> samples;  // scaling on
};

}  // namespace

IngestResult ingest_corpus(const std::vector<std::filesystem::path>& files,
                           const std::vector<Region>& regions,
                           const StopwordSet& stopwords,
                           const IngestOptions& options) {
  if (regions.empty()) throw ConfigError("no regions configured");

  std::vector<uint64_t> quota(regions.size(), 0);
  if (options.population_scaling) {
    if (!(options.per_capita_rate > 0.0) || !std::isfinite(options.per_capita_rate)) {
      throw ConfigError("per-capita rate must be a positive finite number");
    }
    for (size_t r = 0; r < regions.size(); ++r) {
      quota[r] = static_cast<uint64_t>(
          std::floor(options.per_capita_rate * static_cast<double>(regions[r].population)));
    }
  }

  size_t n_workers = std::max<size_t>(1, options.workers);
  n_workers = std::min(n_workers, std::max<size_t>(1, files.size()));

  std::vector<WorkerState> states(n_workers);
  for (auto& st : states) {
    st.region_records.assign(regions.size(), 0);
    if (options.population_scaling) {
      st.samples.resize(regions.size());
    } else {
      st.partials.resize(regions.size());
      for (size_t r = 0; r < regions.size(); ++r) st.partials[r].region_id = regions[r].id;
    }
  }

  std::atomic<size_t> next_file{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto work = [&](size_t worker_idx) {
    WorkerState& st = states[worker_idx];
    RawRecord record;
    try {
      for (;;) {
        size_t fi = next_file.fetch_add(1);
        if (fi >= files.size()) break;
        std::ifstream in(files[fi], std::ios::binary);
        if (!in) throw ConfigError("cannot open input file: " + files[fi].string());
        std::string line;
        uint64_t line_no = 0;
        while (std::getline(in, line)) {
          ++line_no;
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);

          ParseStatus status = parse_record(line, record);
          if (status != ParseStatus::ok) {
            ++st.counters.errors;
            continue;
          }
          if (!is_english(record, stopwords)) {
            ++st.counters.non_english;
            continue;
          }
          int r = assign_region(record.point, regions);
          if (r < 0) {
            ++st.counters.unassigned;
            continue;
          }
          ++st.counters.assigned;
          ++st.region_records[static_cast<size_t>(r)];

          if (options.population_scaling && quota[static_cast<size_t>(r)] == 0) continue;

          std::vector<std::string> tokens = preprocess(record.text, stopwords);
          if (!options.population_scaling) {
            bow_add(st.partials[static_cast<size_t>(r)], tokens);
            continue;
          }
          std::string record_key =
              record.id.empty() ? std::to_string(fi) + ':' + std::to_string(line_no)
                                : record.id;
          Sample s;
          s.key = subsample_key(options.seed, regions[static_cast<size_t>(r)].id, record_key);
          s.file_idx = fi;
          s.line_no = line_no;
          s.tokens = std::move(tokens);
          SampleHeap& heap = st.samples[static_cast<size_t>(r)];
          if (heap.size() < quota[static_cast<size_t>(r)]) {
            heap.push(std::move(s));
          } else if (SampleWorse{}(s, heap.top())) {
            heap.pop();
            heap.push(std::move(s));
          }
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (n_workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (size_t w = 0; w < n_workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  IngestResult result;
  result.region_records.assign(regions.size(), 0);
  result.region_retained.assign(regions.size(), 0);
  for (const auto& st : states) {
    result.counters.assigned += st.counters.assigned;
    result.counters.unassigned += st.counters.unassigned;
    result.counters.non_english += st.counters.non_english;
    result.counters.errors += st.counters.errors;
    for (size_t r = 0; r < regions.size(); ++r) {
      result.region_records[r] += st.region_records[r];
    }
  }

  result.models.resize(regions.size());
  for (size_t r = 0; r < regions.size(); ++r) {
    result.models[r].region_id = regions[r].id;
    if (!options.population_scaling) {
      for (const auto& st : states) {
        result.models[r] = merge(result.models[r], st.partials[r]);
      }
      result.region_retained[r] = result.models[r].record_count;
      continue;
    }

    // union of per-worker selections, then one global selection of the quota
    // smallest keys; equivalent to selecting over the whole region at once
    std::vector<Sample> pool;
    for (auto& st : states) {
      SampleHeap& heap = st.samples[r];
      while (!heap.empty()) {
        // the comparator reads only the POD fields, so moving tokens out of
        // the top before pop cannot disturb the heap order
        pool.push_back(std::move(const_cast<Sample&>(heap.top())));
        heap.pop();
      }
    }
    std::sort(pool.begin(), pool.end(), SampleWorse{});
    if (pool.size() > quota[r]) pool.resize(quota[r]);
    for (const auto& s : pool) bow_add(result.models[r], s.tokens);
    result.region_retained[r] = result.models[r].record_count;

    if (quota[r] == 0 && result.region_records[r] > 0) {
      result.warnings.push_back("region " + regions[r].id +
                                ": per-capita quota is 0, all records dropped");
    } else if (result.region_records[r] > 0 && result.region_records[r] < quota[r]) {
      result.warnings.push_back(
          "region " + regions[r].id + ": only " + std::to_string(result.region_records[r]) +
          " records for a quota of " + std::to_string(quota[r]) + ", keeping all");
    }
  }

  return result;
}

}  // namespace geolex
