#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "geolex/bow.hpp"
#include "geolex/util.hpp"

using namespace geolex;

namespace {

BowModel model_of(std::string id, std::vector<std::pair<std::string, uint64_t>> entries,
                  uint64_t records) {
  BowModel m;
  m.region_id = std::move(id);
  for (auto& [t, c] : entries) m.counts[t] = c;
  m.record_count = records;
  return m;
}

bool same_model(const BowModel& a, const BowModel& b) {
  return a.region_id == b.region_id && a.record_count == b.record_count &&
         a.counts == b.counts;
}

BowModel random_model(std::mt19937_64& rng, const std::string& id) {
  std::uniform_int_distribution<int> n_tokens(0, 8);
  std::uniform_int_distribution<int> token(0, 11);
  std::uniform_int_distribution<uint64_t> count(1, 20);
  std::uniform_int_distribution<uint64_t> recs(0, 30);
  BowModel m;
  m.region_id = id;
  int n = n_tokens(rng);
  for (int i = 0; i < n; ++i) m.counts["t" + std::to_string(token(rng))] += count(rng);
  m.record_count = recs(rng);
  return m;
}

}  // namespace

TEST_CASE("tallying records") {
  BowModel m = build_bow("r", {{"a", "b", "a"}, {"b"}});
  CHECK(m.record_count == 2);
  CHECK(m.counts == decltype(m.counts){{"a", 2}, {"b", 2}});

  BowModel empty = build_bow("r", {});
  CHECK(empty.record_count == 0);
  CHECK(empty.counts.empty());

  std::vector<std::vector<std::string>> lists(1000, {"x"});
  BowModel big = build_bow("r", lists);
  CHECK(big.record_count == 1000);
  CHECK(big.counts.at("x") == 1000);

  // records with no tokens still count toward the denominator
  BowModel sparse = build_bow("r", {{}, {"a"}, {}});
  CHECK(sparse.record_count == 3);
  CHECK(sparse.counts.at("a") == 1);
}

TEST_CASE("merge sums counts and records") {
  BowModel a = model_of("r", {{"a", 1}}, 1);
  BowModel b = model_of("r", {{"a", 2}, {"b", 1}}, 2);
  BowModel m = merge(a, b);
  CHECK(same_model(m, model_of("r", {{"a", 3}, {"b", 1}}, 3)));

  BowModel empty = model_of("r", {}, 0);
  CHECK(same_model(merge(a, empty), a));
  CHECK(same_model(merge(empty, a), a));
  CHECK(same_model(merge(a, b), merge(b, a)));

  BowModel other = model_of("q", {{"a", 1}}, 1);
  CHECK_THROWS_AS(merge(a, other), DataError);
}

TEST_CASE("merge is associative and commutative with identity") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 60; ++i) {
    BowModel a = random_model(rng, "r");
    BowModel b = random_model(rng, "r");
    BowModel c = random_model(rng, "r");
    CHECK(same_model(merge(merge(a, b), c), merge(a, merge(b, c))));
    CHECK(same_model(merge(a, b), merge(b, a)));
    CHECK(same_model(merge(a, model_of("r", {}, 0)), a));
  }
}

TEST_CASE("top-k trim keeps the largest counts with lexicographic ties") {
  BowModel m = model_of("r", {{"a", 5}, {"b", 3}, {"c", 3}, {"d", 1}}, 9);
  BowModel t = trim_top_k(m, 2);
  CHECK(t.counts == decltype(t.counts){{"a", 5}, {"b", 3}});
  CHECK(t.record_count == 9);

  BowModel small = model_of("r", {{"a", 1}}, 1);
  CHECK(same_model(trim_top_k(small, 5000), small));
}

TEST_CASE("top-k trim matches a brute-force sort on a large model") {
  std::mt19937_64 rng(7);
  BowModel m;
  m.region_id = "r";
  m.record_count = 1;
  std::vector<uint64_t> counts(6000);
  for (size_t i = 0; i < counts.size(); ++i) counts[i] = i + 1;
  std::shuffle(counts.begin(), counts.end(), rng);
  for (size_t i = 0; i < counts.size(); ++i) {
    m.counts["tok" + std::to_string(i)] = counts[i];
  }
  BowModel t = trim_top_k(m, 5000);
  CHECK(t.counts.size() == 5000);
  uint64_t min_kept = UINT64_MAX;
  for (const auto& [tok, c] : t.counts) min_kept = std::min(min_kept, c);
  // counts are the distinct values 1..6000, so the kept cutoff is exact
  CHECK(min_kept == 1001);
  for (const auto& [tok, c] : m.counts) {
    if (c > 1000) CHECK(t.counts.count(tok) == 1);
  }
}

TEST_CASE("normalization divides by the record count") {
  BowModel m = model_of("r", {{"a", 2}, {"b", 1}}, 10);
  NormalizedBow nb = normalize(m, 5000);
  CHECK(nb.weight(nb.counts.at("a")) == 0.2);
  CHECK(nb.weight(nb.counts.at("b")) == 0.1);
  CHECK(nb.record_count == 10);

  BowModel ones = model_of("r", {{"a", 7}}, 7);
  CHECK(normalize(ones, 10).weight(7) == 1.0);

  BowModel empty = model_of("r", {}, 0);
  CHECK_THROWS_AS(normalize(empty, 10), DataError);
}

TEST_CASE("normalized weight sum equals total count over record count") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 40; ++i) {
    BowModel m = random_model(rng, "r");
    if (m.record_count == 0 || m.counts.empty()) continue;
    NormalizedBow nb = normalize(m, 5000);
    double weight_sum = 0.0;
    uint64_t count_sum = 0;
    for (const auto& [t, c] : nb.counts) {
      weight_sum += nb.weight(c);
      count_sum += c;
    }
    double expected = static_cast<double>(count_sum) / static_cast<double>(m.record_count);
    CHECK(weight_sum == doctest::Approx(expected).epsilon(1e-12));
  }
  // with power-of-two record counts the division is exact
  BowModel m = model_of("r", {{"a", 3}, {"b", 5}}, 8);
  NormalizedBow nb = normalize(m, 5000);
  CHECK(nb.weight(3) + nb.weight(5) == 1.0);
}

TEST_CASE("snapshot round-trip is exact") {
  std::mt19937_64 rng(1234);
  auto dir = std::filesystem::temp_directory_path();
  for (int i = 0; i < 25; ++i) {
    BowModel m = random_model(rng, "region_x");
    if (m.record_count == 0) m.record_count = 1;
    NormalizedBow nb = normalize(m, 5000);
    auto path = dir / ("geolex_snap_" + std::to_string(i) + ".bow");
    save_snapshot(nb, path);
    NormalizedBow back = load_snapshot(path);
    CHECK(back == nb);
    CHECK(back.norm2_full == nb.norm2_full);
  }
}

TEST_CASE("snapshot loading rejects bad files") {
  auto dir = std::filesystem::temp_directory_path();

  auto future = dir / "geolex_snap_future.bow";
  write_text_file(future, "geolex-bow v2\tr\t1\t0\n");
  CHECK_THROWS_AS(load_snapshot(future), DataError);

  auto truncated = dir / "geolex_snap_trunc.bow";
  write_text_file(truncated, "geolex-bow v1\tr\t5\t3\na\t2\n");
  CHECK_THROWS_AS(load_snapshot(truncated), DataError);

  auto garbage = dir / "geolex_snap_garbage.bow";
  write_text_file(garbage, "not a snapshot at all\n");
  CHECK_THROWS_AS(load_snapshot(garbage), DataError);

  CHECK_THROWS_AS(load_snapshot(dir / "geolex_snap_missing.bow"), ConfigError);
}

TEST_CASE("snapshot text is sorted and stable") {
  BowModel m = model_of("r1", {{"zed", 2}, {"alp", 2}, {"mid", 7}}, 4);
  auto path = std::filesystem::temp_directory_path() / "geolex_snap_golden.bow";
  save_snapshot(normalize(m, 5000), path);
  CHECK(read_text_file(path) == "geolex-bow v1\tr1\t4\t3\nmid\t7\nalp\t2\nzed\t2\n");
}

TEST_CASE("subsampling keys are deterministic and input-sensitive") {
  uint64_t k = subsample_key(1, "region", "rec-1");
  CHECK(k == subsample_key(1, "region", "rec-1"));
  CHECK(k != subsample_key(2, "region", "rec-1"));
  CHECK(k != subsample_key(1, "other", "rec-1"));
  CHECK(k != subsample_key(1, "region", "rec-2"));
  // the separator prevents (region, key) boundary confusion
  CHECK(subsample_key(1, "ab", "c") != subsample_key(1, "a", "bc"));
}
