#include "geolex/similarity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <unordered_map>

#include "geolex/util.hpp"

namespace geolex {

namespace {

struct SharedAccum {
  double dot = 0.0;
  double a2 = 0.0;
  double b2 = 0.0;
  uint64_t count = 0;
};

// One pass over the overlap in ascending token order. The fixed order plus
// commutativity of each term makes every downstream result bit-identical
// under argument swap.
SharedAccum shared_accumulate(const NormalizedBow& a, const NormalizedBow& b) {
  const bool a_small = a.counts.size() <= b.counts.size();
  const auto& probe = a_small ? a.counts : b.counts;
  const auto& other = a_small ? b.counts : a.counts;

  std::vector<std::tuple<const std::string*, double, double>> shared;
  shared.reserve(probe.size());
  for (const auto& [token, count] : probe) {
    auto it = other.find(token);
    if (it == other.end()) continue;
    double wp = a_small ? a.weight(count) : b.weight(count);
    double wo = a_small ? b.weight(it->second) : a.weight(it->second);
    shared.emplace_back(&token, a_small ? wp : wo, a_small ? wo : wp);
  }
  std::sort(shared.begin(), shared.end(),
            [](const auto& x, const auto& y) { return *std::get<0>(x) < *std::get<0>(y); });

  SharedAccum acc;
  acc.count = shared.size();
  for (const auto& [token, wa, wb] : shared) {
    acc.dot += wa * wb;
    acc.a2 += wa * wa;
    acc.b2 += wb * wb;
  }
  return acc;
}

double finish_cosine(double dot, double a2, double b2) {
  if (!(a2 > 0.0) || !(b2 > 0.0)) return 0.0;
  double c = dot / (std::sqrt(a2) * std::sqrt(b2));
  return std::clamp(c, 0.0, 1.0);
}

}  // namespace

std::vector<std::string> shared_tokens(const NormalizedBow& a, const NormalizedBow& b) {
  const auto& probe = a.counts.size() <= b.counts.size() ? a.counts : b.counts;
  const auto& other = (&probe == &a.counts) ? b.counts : a.counts;
  std::vector<std::string> out;
  for (const auto& [token, count] : probe) {
    (void)count;
    if (other.count(token)) out.push_back(token);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double cosine_similarity(const NormalizedBow& a, const NormalizedBow& b, CosineMode mode) {
  SharedAccum acc = shared_accumulate(a, b);
  if (mode == CosineMode::shared_only) return finish_cosine(acc.dot, acc.a2, acc.b2);
  return finish_cosine(acc.dot, a.norm2_full, b.norm2_full);
}

double cosine_similarity(const WeightMap& a, const WeightMap& b, CosineMode mode) {
  double dot = 0.0, a2s = 0.0, b2s = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      a2s += ia->second * ia->second;
      b2s += ib->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  if (mode == CosineMode::shared_only) return finish_cosine(dot, a2s, b2s);
  double a2 = 0.0, b2 = 0.0;
  for (const auto& [t, w] : a) a2 += w * w;
  for (const auto& [t, w] : b) b2 += w * w;
  return finish_cosine(dot, a2, b2);
}

namespace {

std::unordered_map<std::string, const Region*> region_index(const std::vector<Region>& regions) {
  std::unordered_map<std::string, const Region*> idx;
  for (const auto& r : regions) idx.emplace(r.id, &r);
  return idx;
}

const Region& region_for(const std::unordered_map<std::string, const Region*>& idx,
                         const std::string& id) {
  auto it = idx.find(id);
  if (it == idx.end()) throw DataError("model region not in region config: " + id);
  return *it->second;
}

}  // namespace

std::vector<SimilarityPair> all_pairs(const std::vector<NormalizedBow>& models,
                                      const std::vector<Region>& regions,
                                      CosineMode mode, const EarthModel& earth,
                                      size_t workers) {
  if (models.size() < 2) throw DataError("need at least two region models to compare");

  auto idx = region_index(regions);
  std::vector<size_t> order(models.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    return models[x].region_id < models[y].region_id;
  });
  for (size_t i = 0; i < order.size(); ++i) {
    region_for(idx, models[order[i]].region_id);
    if (i > 0 && models[order[i - 1]].region_id == models[order[i]].region_id) {
      throw DataError("duplicate model for region: " + models[order[i]].region_id);
    }
  }

  struct Job {
    size_t a, b;
  };
  std::vector<Job> jobs;
  jobs.reserve(order.size() * (order.size() - 1) / 2);
  for (size_t i = 0; i < order.size(); ++i) {
    for (size_t j = i + 1; j < order.size(); ++j) jobs.push_back({order[i], order[j]});
  }

  std::vector<SimilarityPair> result(jobs.size());
  auto run_job = [&](size_t k) {
    const NormalizedBow& ma = models[jobs[k].a];
    const NormalizedBow& mb = models[jobs[k].b];
    const Region& ra = region_for(idx, ma.region_id);
    const Region& rb = region_for(idx, mb.region_id);
    SharedAccum acc = shared_accumulate(ma, mb);
    SimilarityPair p;
    p.region_i = ma.region_id;
    p.region_j = mb.region_id;
    p.distance_km = haversine_km(ra.centroid, rb.centroid, earth);
    p.similarity = mode == CosineMode::shared_only
                       ? finish_cosine(acc.dot, acc.a2, acc.b2)
                       : finish_cosine(acc.dot, ma.norm2_full, mb.norm2_full);
    p.shared_token_count = acc.count;
    result[k] = std::move(p);
  };

  size_t n_workers = std::max<size_t>(1, std::min(workers, jobs.size()));
  if (n_workers == 1) {
    for (size_t k = 0; k < jobs.size(); ++k) run_job(k);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (size_t w = 0; w < n_workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          size_t k = next.fetch_add(1);
          if (k >= jobs.size()) break;
          run_job(k);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  return result;
}

std::vector<SimilarityObs> similarity_function(const NormalizedBow& focus,
                                               const std::vector<NormalizedBow>& others,
                                               const std::vector<Region>& regions,
                                               CosineMode mode, const EarthModel& earth) {
  auto idx = region_index(regions);
  const Region& rf = region_for(idx, focus.region_id);

  std::vector<const NormalizedBow*> order;
  order.reserve(others.size());
  for (const auto& m : others) {
    if (m.region_id != focus.region_id) order.push_back(&m);
  }
  std::sort(order.begin(), order.end(),
            [](const NormalizedBow* x, const NormalizedBow* y) {
              return x->region_id < y->region_id;
            });

  std::vector<SimilarityObs> out;
  out.reserve(order.size());
  for (const NormalizedBow* m : order) {
    const Region& ro = region_for(idx, m->region_id);
    SimilarityObs obs;
    obs.other_region = m->region_id;
    obs.distance_km = haversine_km(rf.centroid, ro.centroid, earth);
    obs.similarity = cosine_similarity(focus, *m, mode);
    out.push_back(std::move(obs));
  }
  return out;
}

}  // namespace geolex
