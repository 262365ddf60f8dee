#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "wsrc/clustering.hpp"
#include "wsrc/kmeans.hpp"
#include "wsrc/vectorize.hpp"

namespace wsrc {

// How spawn_nest picks between split_step and merge_step for each operation.
enum class OperationChoice {
  coin,      // split with probability split_probability, else merge
  cohesion,  // merge iff the most similar centroid pair beats the least cohesive cluster
};

struct CuckooConfig {
  std::size_t nests = 5;
  std::size_t kmeans_iters = 4;
  double abandon_probability = 0.15;  // p_a
  std::size_t spawn_rounds = 10;
  std::size_t ops_per_spawn = 10;
  OperationChoice operation_choice = OperationChoice::cohesion;
  double split_probability = 0.5;  // used by OperationChoice::coin
  std::uint64_t seed = 42;

  void validate() const {
    if (nests < 2) throw std::invalid_argument("nest count must be at least 2");
    if (kmeans_iters < 1) throw std::invalid_argument("k-means iteration count must be at least 1");
    if (!(abandon_probability >= 0.1 && abandon_probability <= 0.2))
      throw std::invalid_argument("abandonment probability must lie in [0.1, 0.2]");
    if (ops_per_spawn < 1) throw std::invalid_argument("operations per spawned nest must be at least 1");
    if (operation_choice == OperationChoice::coin && !(split_probability >= 0.0 && split_probability <= 1.0))
      throw std::invalid_argument("split probability must lie in [0, 1]");
  }

  bool operator==(const CuckooConfig&) const = default;
};

enum class NestOrigin { initial, spawned };

struct Nest {
  Clustering clustering;
  std::size_t generation = 0;
  NestOrigin origin = NestOrigin::initial;

  bool operator==(const Nest&) const = default;
};

// Fixed-size population of candidate clusterings over the same n documents.
struct NestPool {
  std::vector<Nest> nests;

  std::size_t size() const noexcept { return nests.size(); }

  std::size_t max_generation() const {
    std::size_t g = 0;
    for (const auto& nest : nests) g = std::max(g, nest.generation);
    return g;
  }

  std::vector<Clustering> clusterings() const {
    std::vector<Clustering> out;
    out.reserve(nests.size());
    for (const auto& nest : nests) out.push_back(nest.clustering);
    return out;
  }

  bool operator==(const NestPool&) const = default;
};

// m nests, each the k-means clustering with k = initial_k(n) under its own
// sub-generator. The k-means jobs run concurrently.
inline NestPool init_pool(std::span<const DocVector> vectors, const CuckooConfig& config, Rng& rng) {
  config.validate();
  if (vectors.empty()) throw std::invalid_argument("init_pool: no documents");
  const std::size_t k = initial_k(vectors.size());

  std::vector<std::uint64_t> seeds(config.nests);
  for (auto& s : seeds) s = rng();

  std::vector<std::future<Clustering>> jobs;
  jobs.reserve(config.nests);
  for (std::uint64_t seed : seeds) {
    jobs.push_back(std::async(std::launch::async, [vectors, k, iters = config.kmeans_iters, seed] {
      Rng local(seed);
      return run_kmeans(vectors, k, iters, local);
    }));
  }
  NestPool pool;
  pool.nests.reserve(config.nests);
  for (auto& job : jobs) pool.nests.push_back({job.get(), 0, NestOrigin::initial});
  return pool;
}

// Replaces the most dispersed cluster with at least two members (ties: lowest
// id) by a 2-means split of its members. Returns the input if every cluster is
// a singleton.
inline Clustering split_step(std::span<const DocVector> vectors, const Clustering& clustering,
                             std::size_t kmeans_iters, Rng& rng) {
  const auto centroids = CentroidTable::compute(vectors, clustering);
  const auto disp = detail::dispersions(vectors, clustering, centroids);
  const auto sizes = clustering.cluster_sizes();

  std::size_t target = clustering.k;
  for (std::size_t c = 0; c < clustering.k; ++c) {
    if (sizes[c] < 2) continue;
    if (target == clustering.k || disp[c] > disp[target]) target = c;
  }
  if (target == clustering.k) return clustering;

  std::vector<std::size_t> members;
  std::vector<DocVector> subset;
  for (std::size_t i = 0; i < clustering.size(); ++i) {
    if (clustering[i] == target) {
      members.push_back(i);
      subset.push_back(vectors[i]);
    }
  }
  const Clustering halves = run_kmeans(subset, 2, kmeans_iters, rng);

  std::vector<std::size_t> labels = clustering.assignment;
  for (std::size_t j = 0; j < members.size(); ++j)
    if (halves[j] == 1) labels[members[j]] = clustering.k;
  return Clustering::from_labels(labels);
}

// Unions the pair of clusters with the most similar centroids (ties: the
// lexicographically smallest id pair). Returns the input if k = 1.
inline Clustering merge_step(std::span<const DocVector> vectors, const Clustering& clustering) {
  if (clustering.k < 2) return clustering;
  const auto centroids = CentroidTable::compute(vectors, clustering);
  std::size_t best_a = 0, best_b = 1;
  double best = -1.0;
  for (std::size_t a = 0; a < clustering.k; ++a) {
    for (std::size_t b = a + 1; b < clustering.k; ++b) {
      const double s = centroids.similarity(a, b);
      if (s > best) {
        best = s;
        best_a = a;
        best_b = b;
      }
    }
  }
  std::vector<std::size_t> labels = clustering.assignment;
  for (auto& label : labels)
    if (label == best_b) label = best_a;
  return Clustering::from_labels(labels);
}

namespace detail {

// Per-cluster mean of 1 - cos(d, centroid of the other members); 0 for
// singletons. Unlike plain dispersion this is not flattered by small clusters,
// where each member makes up a large share of its own centroid.
inline std::vector<double> leave_one_out_dispersions(std::span<const DocVector> vectors,
                                                     const Clustering& clustering) {
  const auto means = CentroidTable::means(vectors, clustering);
  const auto sizes = clustering.cluster_sizes();
  std::vector<double> sq_sum(clustering.k, 0.0);
  for (std::size_t c = 0; c < clustering.k; ++c) {
    const double s = static_cast<double>(sizes[c]);
    for (double x : means.row(c)) sq_sum[c] += x * x * s * s;
  }
  std::vector<double> out(clustering.k, 0.0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const std::size_t c = clustering[i];
    if (sizes[c] < 2) continue;
    const double s = static_cast<double>(sizes[c]);
    const auto mean = means.row(c);
    double dot_sum = 0.0;
    for (const auto& [term, w] : vectors[i].entries()) dot_sum += w * mean[term] * s;
    const double self = vectors[i].norm() * vectors[i].norm();
    const double rest = std::sqrt(std::max(0.0, sq_sum[c] - 2.0 * dot_sum + self));
    out[c] += 1.0 - (rest > 0.0 ? (dot_sum - self) / rest : 0.0);
  }
  for (std::size_t c = 0; c < clustering.k; ++c)
    if (sizes[c] >= 2) out[c] /= static_cast<double>(sizes[c]);
  return out;
}

}  // namespace detail

// Merge test used by OperationChoice::cohesion. Dispersion here is the
// leave-one-out kind. The closest pair of clusters (by centroid similarity)
// should be merged when either
//   - their centroid similarity is at least 1 - max dispersion, i.e. they are as
//     close as the least cohesive cluster's members are to the rest of it, or
//   - the merged cluster would be no more dispersed than the most dispersed
//     existing cluster.
inline bool prefers_merge(std::span<const DocVector> vectors, const Clustering& clustering) {
  if (clustering.k < 2) return false;
  const auto sizes = clustering.cluster_sizes();
  // A singleton says nothing about cohesion; keep merging until none is left.
  if (std::any_of(sizes.begin(), sizes.end(), [](std::size_t s) { return s < 2; })) return true;
  const auto centroids = CentroidTable::compute(vectors, clustering);
  const auto disp = detail::leave_one_out_dispersions(vectors, clustering);
  const double worst = *std::max_element(disp.begin(), disp.end());

  std::size_t best_a = 0, best_b = 1;
  double closest = -1.0;
  for (std::size_t a = 0; a < clustering.k; ++a) {
    for (std::size_t b = a + 1; b < clustering.k; ++b) {
      const double sim = centroids.similarity(a, b);
      if (sim > closest) {
        closest = sim;
        best_a = a;
        best_b = b;
      }
    }
  }
  if (closest >= 1.0 - worst) return true;

  std::vector<std::size_t> labels = clustering.assignment;
  for (auto& label : labels)
    if (label == best_b) label = best_a;
  const Clustering merged = Clustering::from_labels(labels);
  const auto merged_disp = detail::leave_one_out_dispersions(vectors, merged);
  const std::size_t member =
      std::find(clustering.assignment.begin(), clustering.assignment.end(), best_a) - clustering.assignment.begin();
  return merged_disp[merged[member]] <= worst;
}

struct SpawnedNest {
  Nest nest;
  std::size_t source = 0;  // index of the copied nest in the pool
};

// Copies a uniformly chosen nest and applies ops_per_spawn operations, each a
// fair-coin choice between split_step and merge_step.
inline SpawnedNest spawn_nest(std::span<const DocVector> vectors, const NestPool& pool,
                              const CuckooConfig& config, Rng& rng) {
  if (pool.nests.empty()) throw std::invalid_argument("spawn_nest: empty pool");
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::bernoulli_distribution coin(config.split_probability);

  SpawnedNest out;
  out.source = pick(rng);
  Clustering clustering = pool.nests[out.source].clustering;
  for (std::size_t op = 0; op < config.ops_per_spawn; ++op) {
    if (config.operation_choice == OperationChoice::coin) {
      if (coin(rng))
        clustering = split_step(vectors, clustering, config.kmeans_iters, rng);
      else
        clustering = merge_step(vectors, clustering);
    } else if (prefers_merge(vectors, clustering)) {
      clustering = merge_step(vectors, clustering);
    } else {
      // A split whose halves would be merged straight back is discarded.
      Clustering split = split_step(vectors, clustering, config.kmeans_iters, rng);
      if (!prefers_merge(vectors, split)) clustering = std::move(split);
    }
  }
  out.nest = {std::move(clustering), pool.max_generation() + 1, NestOrigin::spawned};
  return out;
}

// spawn_rounds rounds: spawn a nest; with probability p_a it replaces a
// uniformly chosen nest (abandonment), otherwise it replaces its own source.
inline NestPool evolve_pool(std::span<const DocVector> vectors, NestPool pool, const CuckooConfig& config,
                            Rng& rng) {
  config.validate();
  if (pool.nests.empty()) throw std::invalid_argument("evolve_pool: empty pool");
  std::bernoulli_distribution abandon(config.abandon_probability);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (std::size_t round = 0; round < config.spawn_rounds; ++round) {
    SpawnedNest spawned = spawn_nest(vectors, pool, config, rng);
    const std::size_t slot = abandon(rng) ? pick(rng) : spawned.source;
    pool.nests[slot] = std::move(spawned.nest);
  }
  return pool;
}

}  // namespace wsrc
