#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "geolex/pipeline.hpp"
#include "geolex/util.hpp"

namespace {

void add_pipeline_flags(CLI::App* cmd, geolex::RunConfig& cfg, std::string& mode) {
  cmd->add_option("--regions", cfg.regions_path, "Region config JSON");
  cmd->add_option("--input", cfg.inputs, "Corpus JSONL paths or globs (repeatable)");
  cmd->add_option("--stopwords", cfg.stopwords_path, "Stopword list, one word per line")
      ->capture_default_str();
  cmd->add_option("--top-k", cfg.top_k, "Tokens kept per region model")
      ->capture_default_str();
  cmd->add_option("--bin-width-km", cfg.bin_width_km, "Distance bin width")
      ->capture_default_str();
  cmd->add_option("--cosine-mode", mode, "Norm scope: shared or full")
      ->check(CLI::IsMember({"shared", "full"}))
      ->capture_default_str();
  cmd->add_flag("--population-scaling", cfg.population_scaling,
                "Subsample each region to floor(rate * population) records");
  cmd->add_option("--per-capita-rate", cfg.per_capita_rate,
                  "Records kept per resident when scaling")
      ->capture_default_str();
  cmd->add_option("--earth-radius-km", cfg.earth_radius_km, "Sphere radius for distances")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Seed for all randomized steps")
      ->capture_default_str();
  cmd->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regional lexical similarity over geotagged text"};
  app.set_version_flag("--version", geolex::kToolVersion);
  app.require_subcommand(1);

  geolex::RunConfig cfg;
  if (cfg.workers == 0) cfg.workers = 1;
  std::string mode = "shared";

  CLI::App* build = app.add_subcommand("build", "Ingest a corpus into region snapshots");
  add_pipeline_flags(build, cfg, mode);
  CLI::App* compare = app.add_subcommand("compare", "Score every snapshot pair");
  add_pipeline_flags(compare, cfg, mode);
  CLI::App* analyze = app.add_subcommand("analyze", "Bin pair scores by distance");
  add_pipeline_flags(analyze, cfg, mode);
  std::string pairs_arg;
  analyze->add_option("pairs", pairs_arg,
                      "Pairs CSV (default <out>/pairs.csv); also accepts a bare "
                      "distance_km,similarity file");
  CLI::App* run = app.add_subcommand("run", "build, compare, analyze in one go");
  add_pipeline_flags(run, cfg, mode);

  geolex::SynthParams sp;
  std::string synth_out = "synth_out";
  CLI::App* synth = app.add_subcommand("synth", "Generate a planted-gradient test corpus");
  synth->add_option("--n-regions", sp.n_regions, "Regions on the chain")->capture_default_str();
  synth->add_option("--spacing-km", sp.spacing_km, "Distance between neighbors")
      ->capture_default_str();
  synth->add_option("--vocab-core", sp.vocab_core, "Shared core vocabulary size")
      ->capture_default_str();
  synth->add_option("--vocab-local", sp.vocab_local, "Region-local vocabulary size")
      ->capture_default_str();
  synth->add_option("--gradient", sp.gradient, "Signal strength in [0,1]")
      ->capture_default_str();
  synth->add_option("--noise-fraction", sp.noise_fraction, "Junk token share in [0,1]")
      ->capture_default_str();
  synth->add_option("--records-per-region", sp.records_per_region, "Records per region")
      ->capture_default_str();
  synth->add_option("--tokens-per-record", sp.tokens_per_record, "Tokens per record")
      ->capture_default_str();
  synth->add_option("--core-share", sp.core_share, "Core vocabulary probability mass")
      ->capture_default_str();
  synth->add_option("--sigma", sp.sigma, "Local usage field log-amplitude")
      ->capture_default_str();
  synth->add_option("--seed", sp.seed, "Generator seed")->capture_default_str();
  synth->add_option("--out", synth_out, "Output directory")->capture_default_str();

  std::string data_dir = "data";
  CLI::App* verify = app.add_subcommand("verify-fixtures", "Checksum the bundled fixtures");
  verify->add_option("--data-dir", data_dir, "Fixture directory")->capture_default_str();

  try {
    app.parse(argc, argv);
    cfg.cosine_mode =
        mode == "full" ? geolex::CosineMode::full_vocab : geolex::CosineMode::shared_only;

    if (*build) {
      geolex::cmd_build(cfg);
    } else if (*compare) {
      geolex::cmd_compare(cfg);
    } else if (*analyze) {
      geolex::cmd_analyze(cfg, pairs_arg);
    } else if (*run) {
      geolex::cmd_run(cfg);
    } else if (*synth) {
      geolex::cmd_synth(sp, synth_out);
    } else if (*verify) {
      size_t n = geolex::verify_fixtures(data_dir);
      std::cout << "ok: " << n << " fixtures verified\n";
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const geolex::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const geolex::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
