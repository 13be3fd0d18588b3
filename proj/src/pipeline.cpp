#include "geolex/pipeline.hpp"

#include <glob.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <json.hpp>

#include "geolex/analysis.hpp"
#include "geolex/bow.hpp"
#include "geolex/geo.hpp"
#include "geolex/ingest.hpp"
#include "geolex/util.hpp"

namespace fs = std::filesystem;

namespace geolex {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}
std::string km3(double v) { return fmt("%.3f", v); }
std::string sim6(double v) { return fmt("%.6f", v); }
std::string pct4(double v) { return fmt("%.4f", v); }
std::string g12(double v) { return fmt("%.12g", v); }

void validate_common(const RunConfig& c) {
  if (c.top_k < 1) throw ConfigError("--top-k must be at least 1");
  if (!(c.bin_width_km > 0.0) || !std::isfinite(c.bin_width_km)) {
    throw ConfigError("--bin-width-km must be a positive finite number");
  }
  if (c.workers < 1) throw ConfigError("--workers must be at least 1");
  if (!(c.earth_radius_km > 0.0) || !std::isfinite(c.earth_radius_km)) {
    throw ConfigError("--earth-radius-km must be a positive finite number");
  }
  if (c.population_scaling &&
      (!(c.per_capita_rate > 0.0) || !std::isfinite(c.per_capita_rate))) {
    throw ConfigError("--per-capita-rate must be a positive finite number");
  }
}

bool has_glob_chars(const std::string& s) {
  return s.find_first_of("*?[") != std::string::npos;
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  if (inputs.empty()) throw ConfigError("at least one --input path or glob is required");
  std::vector<std::string> found;
  for (const auto& in : inputs) {
    if (has_glob_chars(in)) {
      ::glob_t g{};
      int rc = ::glob(in.c_str(), 0, nullptr, &g);
      if (rc == 0) {
        for (size_t i = 0; i < g.gl_pathc; ++i) found.emplace_back(g.gl_pathv[i]);
      } else if (rc != GLOB_NOMATCH) {
        ::globfree(&g);
        throw ConfigError("cannot expand input pattern: " + in);
      }
      ::globfree(&g);
    } else {
      if (!fs::exists(in)) throw ConfigError("input file not found: " + in);
      found.push_back(in);
    }
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  if (found.empty()) throw ConfigError("no input files matched the given patterns");
  return {found.begin(), found.end()};
}

// manifests name inputs relative to the output tree when they live inside
// it, so staged and composed runs into different directories stay byte-equal
std::string manifest_key(const fs::path& p, const fs::path& out_dir) {
  fs::path rel = p.lexically_relative(out_dir);
  if (rel.empty() || rel.generic_string().rfind("..", 0) == 0) return p.generic_string();
  return rel.generic_string();
}

nlohmann::json config_echo(const RunConfig& c) {
  nlohmann::json j;
  j["regions"] = c.regions_path.generic_string();
  j["inputs"] = c.inputs;
  j["stopwords"] = c.stopwords_path.generic_string();
  j["top_k"] = c.top_k;
  j["bin_width_km"] = c.bin_width_km;
  j["cosine_mode"] = c.cosine_mode == CosineMode::shared_only ? "shared" : "full";
  j["population_scaling"] = c.population_scaling;
  j["per_capita_rate"] = c.per_capita_rate;
  j["earth_radius_km"] = c.earth_radius_km;
  j["seed"] = c.seed;
  // out_dir and workers are execution details that do not shape the data
  return j;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const nlohmann::json& config, const std::vector<fs::path>& inputs) {
  nlohmann::json j;
  j["tool"] = kToolVersion;
  j["command"] = command;
  j["config"] = config;
  nlohmann::json in = nlohmann::json::object();
  for (const auto& p : inputs) in[manifest_key(p, out_dir)] = sha256_file(p);
  j["inputs"] = in;
  write_text_file(out_dir / ("manifest_" + command + ".json"), j.dump(2) + "\n");
}

bool valid_region_token(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != '-') {
      return false;
    }
  }
  return true;
}

}  // namespace

void cmd_build(const RunConfig& c) {
  validate_common(c);
  if (c.regions_path.empty()) throw ConfigError("--regions is required");
  auto regions = load_regions(c.regions_path);
  auto stopwords = load_stopwords(c.stopwords_path);
  auto files = expand_inputs(c.inputs);

  IngestOptions opt;
  opt.workers = c.workers;
  opt.population_scaling = c.population_scaling;
  opt.per_capita_rate = c.per_capita_rate;
  opt.seed = c.seed;
  IngestResult res = ingest_corpus(files, regions, stopwords, opt);

  fs::path snapdir = c.out_dir / "snapshots";
  std::error_code ec;
  fs::create_directories(snapdir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + snapdir.string());
  for (const auto& entry : fs::directory_iterator(snapdir)) {
    if (entry.path().extension() == ".bow") fs::remove(entry.path());
  }

  std::vector<std::string> warnings = res.warnings;
  size_t written = 0;
  for (size_t r = 0; r < regions.size(); ++r) {
    if (res.models[r].record_count == 0) {
      warnings.push_back("region " + regions[r].id + ": no records, snapshot skipped");
      continue;
    }
    NormalizedBow nb = normalize(trim_top_k(res.models[r], c.top_k), c.top_k);
    save_snapshot(nb, snapdir / (regions[r].id + ".bow"));
    ++written;
  }
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  nlohmann::json report;
  report["counters"] = {{"assigned", res.counters.assigned},
                        {"unassigned", res.counters.unassigned},
                        {"non_english", res.counters.non_english},
                        {"errors", res.counters.errors}};
  report["regions"] = nlohmann::json::array();
  for (size_t r = 0; r < regions.size(); ++r) {
    report["regions"].push_back({{"id", regions[r].id},
                                 {"records", res.region_records[r]},
                                 {"retained", res.region_retained[r]}});
  }
  report["warnings"] = warnings;
  write_text_file(c.out_dir / "ingest_report.json", report.dump(2) + "\n");

  std::vector<fs::path> inputs{c.regions_path, c.stopwords_path};
  inputs.insert(inputs.end(), files.begin(), files.end());
  write_manifest(c.out_dir, "build", config_echo(c), inputs);

  std::cerr << "build: " << written << " snapshots from " << res.counters.assigned
            << " assigned records\n";
}

void cmd_compare(const RunConfig& c) {
  validate_common(c);
  if (c.regions_path.empty()) throw ConfigError("--regions is required");
  auto regions = load_regions(c.regions_path);

  fs::path snapdir = c.out_dir / "snapshots";
  std::vector<fs::path> snaps;
  if (fs::is_directory(snapdir)) {
    for (const auto& entry : fs::directory_iterator(snapdir)) {
      if (entry.path().extension() == ".bow") snaps.push_back(entry.path());
    }
    std::sort(snaps.begin(), snaps.end());
  }
  if (snaps.size() < 2) {
    throw DataError("need at least two snapshots under " + snapdir.string() +
                    " (run build first)");
  }

  std::vector<NormalizedBow> models;
  models.reserve(snaps.size());
  for (const auto& p : snaps) models.push_back(load_snapshot(p));

  EarthModel earth{c.earth_radius_km};
  auto pairs = all_pairs(models, regions, c.cosine_mode, earth, c.workers);

  std::string csv = "region_i,region_j,distance_km,similarity,shared_tokens\n";
  for (const auto& p : pairs) {
    csv += p.region_i + ',' + p.region_j + ',' + km3(p.distance_km) + ',' +
           sim6(p.similarity) + ',' + std::to_string(p.shared_token_count) + '\n';
  }
  write_text_file(c.out_dir / "pairs.csv", csv);
  write_manifest(c.out_dir, "compare", config_echo(c), snaps);
  std::cerr << "compare: " << pairs.size() << " pairs\n";
}

namespace {

struct PairsFile {
  bool five_col = false;
  std::vector<SimilarityPair> pairs;  // five_col only
  ObservationList observations;       // two-column mode
};

double parse_double_field(const std::string& field, size_t line_no, const char* what) {
  double v = 0.0;
  auto [ptr, err] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (err != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw DataError("pairs file line " + std::to_string(line_no) + ": bad " + what + ": " +
                    field);
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

PairsFile read_pairs_file(const fs::path& path) {
  std::string text = read_text_file(path);
  PairsFile out;
  size_t pos = 0, line_no = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
    pos = nl == std::string::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (!saw_header) {
      if (line == "region_i,region_j,distance_km,similarity,shared_tokens") {
        out.five_col = true;
      } else if (line == "distance_km,similarity") {
        out.five_col = false;
      } else {
        throw DataError("unrecognized pairs header: " + line);
      }
      saw_header = true;
      continue;
    }

    auto fields = split_csv(line);
    if (out.five_col) {
      if (fields.size() != 5) {
        throw DataError("pairs file line " + std::to_string(line_no) + ": expected 5 fields");
      }
      if (!valid_region_token(fields[0]) || !valid_region_token(fields[1])) {
        throw DataError("pairs file line " + std::to_string(line_no) + ": bad region id");
      }
      SimilarityPair p;
      p.region_i = fields[0];
      p.region_j = fields[1];
      p.distance_km = parse_double_field(fields[2], line_no, "distance");
      p.similarity = parse_double_field(fields[3], line_no, "similarity");
      if (p.distance_km < 0.0) {
        throw DataError("pairs file line " + std::to_string(line_no) + ": negative distance");
      }
      out.pairs.push_back(std::move(p));
    } else {
      if (fields.size() != 2) {
        throw DataError("pairs file line " + std::to_string(line_no) + ": expected 2 fields");
      }
      Observation o;
      o.distance_km = parse_double_field(fields[0], line_no, "distance");
      o.similarity = parse_double_field(fields[1], line_no, "similarity");
      if (o.distance_km < 0.0) {
        throw DataError("pairs file line " + std::to_string(line_no) + ": negative distance");
      }
      out.observations.push_back(o);
    }
  }
  if (!saw_header) throw DataError("pairs file is empty: " + path.string());
  return out;
}

}  // namespace

void cmd_analyze(const RunConfig& c, const fs::path& pairs_path) {
  validate_common(c);
  fs::path source = pairs_path.empty() ? c.out_dir / "pairs.csv" : pairs_path;
  PairsFile data = read_pairs_file(source);

  ObservationList agg;
  std::map<std::string, ObservationList> by_region;
  if (data.five_col) {
    if (data.pairs.empty()) throw DataError("pairs file has no data rows: " + source.string());
    for (const auto& p : data.pairs) {
      by_region[p.region_i].push_back({p.distance_km, p.similarity});
      by_region[p.region_j].push_back({p.distance_km, p.similarity});
    }
    std::vector<ObservationList> functions;
    functions.reserve(by_region.size());
    for (const auto& [id, obs] : by_region) functions.push_back(obs);
    agg = aggregate(functions);
  } else {
    if (data.observations.empty()) {
      throw DataError("pairs file has no data rows: " + source.string());
    }
    agg = data.observations;
  }

  auto bins = bin_means(agg, c.bin_width_km);
  auto rows = decay_table(bins);

  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + c.out_dir.string());

  std::string bins_csv = "bin_start_km,bin_end_km,pair_count,mean_similarity,delta_s_pct,cum_delta_s_pct\n";
  for (const auto& row : rows) {
    bins_csv += km3(row.bin_start_km) + ',' + km3(row.bin_start_km + c.bin_width_km) + ',' +
                std::to_string(row.pair_count) + ',';
    if (row.pair_count == 0) {
      bins_csv += ",,\n";
    } else {
      bins_csv += sim6(row.mean_similarity) + ',' + pct4(row.delta_s * 100.0) + ',' +
                  pct4(row.cum_delta_s * 100.0) + '\n';
    }
  }
  write_text_file(c.out_dir / "bins.csv", bins_csv);

  if (data.five_col) {
    // per-region profile: that region's observations against every other
    for (const auto& [id, obs] : by_region) {
      std::vector<SimilarityObs> rows_out;
      for (const auto& p : data.pairs) {
        if (p.region_i != id && p.region_j != id) continue;
        rows_out.push_back({p.region_i == id ? p.region_j : p.region_i, p.distance_km,
                            p.similarity});
      }
      std::sort(rows_out.begin(), rows_out.end(),
                [](const SimilarityObs& a, const SimilarityObs& b) {
                  return a.other_region < b.other_region;
                });
      std::string csv = "other_region,distance_km,similarity\n";
      for (const auto& r : rows_out) {
        csv += r.other_region + ',' + km3(r.distance_km) + ',' + sim6(r.similarity) + '\n';
      }
      write_text_file(c.out_dir / ("fcity_" + id + ".csv"), csv);
    }
  }

  std::string trend;
  try {
    TrendFit fit = linear_fit(agg);
    trend = "slope_per_km " + g12(fit.slope) + "\nintercept " + g12(fit.intercept) +
            "\nr_value " + g12(fit.r_value) + "\nobservations " +
            std::to_string(agg.size()) + "\n";
  } catch (const DataError&) {
    trend = "slope_per_km undefined\nintercept undefined\nr_value undefined\nobservations " +
            std::to_string(agg.size()) + "\n";
  }
  write_text_file(c.out_dir / "trend.txt", trend);

  write_manifest(c.out_dir, "analyze", config_echo(c), {source});
  std::cerr << "analyze: " << agg.size() << " observations, " << rows.size() << " bins\n";
}

void cmd_synth(const SynthParams& p, const fs::path& out_dir) {
  SynthOutputs o = generate_synthetic_corpus(p, out_dir);

  nlohmann::json j;
  j["tool"] = kToolVersion;
  j["command"] = "synth";
  j["params"] = {{"n_regions", p.n_regions},
                 {"spacing_km", p.spacing_km},
                 {"vocab_core", p.vocab_core},
                 {"vocab_local", p.vocab_local},
                 {"gradient", p.gradient},
                 {"noise_fraction", p.noise_fraction},
                 {"records_per_region", p.records_per_region},
                 {"seed", p.seed},
                 {"tokens_per_record", p.tokens_per_record},
                 {"core_share", p.core_share},
                 {"sigma", p.sigma}};
  nlohmann::json outputs = nlohmann::json::object();
  outputs[manifest_key(o.regions_path, out_dir)] = sha256_file(o.regions_path);
  for (const auto& path : o.corpus_paths) {
    outputs[manifest_key(path, out_dir)] = sha256_file(path);
  }
  j["outputs"] = outputs;
  write_text_file(out_dir / "manifest_synth.json", j.dump(2) + "\n");

  std::cerr << "synth: " << o.corpus_paths.size() << " region files under "
            << out_dir.string() << "\n";
}

void cmd_run(const RunConfig& c) {
  cmd_build(c);
  cmd_compare(c);
  cmd_analyze(c);
}

size_t verify_fixtures(const fs::path& data_dir) {
  std::string text = read_text_file(data_dir / "MANIFEST");
  size_t pos = 0, checked = 0;
  std::vector<std::string> failures;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
    pos = nl == std::string::npos ? text.size() : nl + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError("MANIFEST line without a tab separator: " + line);
    }
    std::string rel = line.substr(0, tab);
    std::string want = line.substr(tab + 1);
    fs::path p = data_dir / rel;
    ++checked;
    if (!fs::exists(p)) {
      failures.push_back(rel + ": missing");
      continue;
    }
    std::string got = sha256_file(p);
    if (got != want) failures.push_back(rel + ": checksum mismatch");
  }
  if (checked == 0) throw DataError("MANIFEST lists no fixtures");
  if (!failures.empty()) {
    std::string msg = "fixture verification failed:";
    for (const auto& f : failures) msg += "\n  " + f;
    throw DataError(msg);
  }
  return checked;
}

}  // namespace geolex
