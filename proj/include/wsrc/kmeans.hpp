#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsrc/clustering.hpp"
#include "wsrc/vectorize.hpp"

namespace wsrc {

using Rng = std::mt19937_64;

// k = min(trunc(sqrt(n) + 1), n).
inline std::size_t initial_k(std::size_t n) {
  if (n == 0) throw std::invalid_argument("initial_k: document count must be positive");
  const auto k = static_cast<std::size_t>(std::trunc(std::sqrt(static_cast<double>(n)) + 1.0));
  return std::clamp<std::size_t>(k, 1, n);
}

inline std::size_t dimension(std::span<const DocVector> vectors) {
  std::size_t dim = 0;
  for (const auto& v : vectors) dim = std::max(dim, v.extent());
  return dim;
}

// Dense centroids, one row per cluster: member mean, L2-normalized (a zero
// mean stays zero).
class CentroidTable {
 public:
  CentroidTable(std::size_t clusters, std::size_t dim) : rows_(clusters), dim_(dim), data_(clusters * dim, 0.0) {}

  static CentroidTable compute(std::span<const DocVector> vectors, std::span<const std::size_t> labels,
                               std::size_t clusters) {
    CentroidTable table(clusters, dimension(vectors));
    table.accumulate(vectors, labels);
    table.normalize_rows();
    return table;
  }

  static CentroidTable compute(std::span<const DocVector> vectors, const Clustering& c) {
    return compute(vectors, c.assignment, c.k);
  }

  void assign_row(std::size_t r, const DocVector& v) {
    auto values = row(r);
    std::fill(values.begin(), values.end(), 0.0);
    for (const auto& [term, w] : v.entries()) values[term] = w;
  }

  // Unnormalized member means; used for the mean-minimizes-SSE property.
  static CentroidTable means(std::span<const DocVector> vectors, const Clustering& c) {
    CentroidTable table(c.k, dimension(vectors));
    table.accumulate(vectors, c.assignment);
    const auto sizes = c.cluster_sizes();
    for (std::size_t r = 0; r < c.k; ++r)
      for (double& x : table.row(r)) x /= static_cast<double>(sizes[r]);
    return table;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * dim_, dim_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * dim_, dim_}; }

  // Clamped dot product of a document and a centroid row.
  double similarity(const DocVector& v, std::size_t r) const {
    const auto c = row(r);
    double dot = 0.0;
    for (const auto& [term, w] : v.entries()) dot += w * c[term];
    return std::clamp(dot, 0.0, 1.0);
  }

  double similarity(std::size_t r1, std::size_t r2) const {
    const auto a = row(r1);
    const auto b = row(r2);
    return std::clamp(std::inner_product(a.begin(), a.end(), b.begin(), 0.0), 0.0, 1.0);
  }

  double squared_distance(const DocVector& v, std::size_t r) const {
    const auto c = row(r);
    double sq = 0.0;
    for (double x : c) sq += x * x;
    for (const auto& [term, w] : v.entries()) sq += w * w - 2.0 * w * c[term];
    return std::max(sq, 0.0);
  }

 private:
  void accumulate(std::span<const DocVector> vectors, std::span<const std::size_t> labels) {
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      auto r = row(labels[i]);
      for (const auto& [term, w] : vectors[i].entries()) r[term] += w;
    }
  }

  void normalize_rows() {
    for (std::size_t r = 0; r < rows_; ++r) {
      auto values = row(r);
      double sq = 0.0;
      for (double x : values) sq += x * x;
      if (sq > 0.0) {
        const double inv = 1.0 / std::sqrt(sq);
        for (double& x : values) x *= inv;
      }
    }
  }

  std::size_t rows_;
  std::size_t dim_;
  std::vector<double> data_;
};

namespace detail {

// Index of the centroid with maximum similarity; ties go to the lowest id.
inline std::size_t nearest_centroid(const CentroidTable& centroids, const DocVector& v,
                                    std::size_t clusters, double* best_out = nullptr) {
  std::size_t best = 0;
  double best_sim = -1.0;
  for (std::size_t r = 0; r < clusters; ++r) {
    const double s = centroids.similarity(v, r);
    if (s > best_sim) {
      best_sim = s;
      best = r;
    }
  }
  if (best_out) *best_out = best_sim;
  return best;
}

// Fills each empty cluster (ascending id) with the worst-fitting document, the
// one with minimum similarity to its current centroid, taken from clusters that
// still have at least two members. Ties go to the lowest document index.
inline void repair_empty_clusters(std::span<const DocVector> vectors, const CentroidTable& centroids,
                                  std::vector<std::size_t>& labels, std::size_t clusters) {
  std::vector<std::size_t> sizes(clusters, 0);
  for (std::size_t label : labels) ++sizes[label];
  std::vector<double> fit(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) fit[i] = centroids.similarity(vectors[i], labels[i]);

  for (std::size_t empty = 0; empty < clusters; ++empty) {
    if (sizes[empty] != 0) continue;
    std::size_t worst = vectors.size();
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (sizes[labels[i]] < 2) continue;
      if (worst == vectors.size() || fit[i] < fit[worst]) worst = i;
    }
    --sizes[labels[worst]];
    labels[worst] = empty;
    ++sizes[empty];
    fit[worst] = 1.0;
  }
}

}  // namespace detail

// Seeded k-means with cosine assignment. Runs exactly `iters` assign/update
// rounds; there is no convergence exit.
inline Clustering run_kmeans(std::span<const DocVector> vectors, std::size_t k, std::size_t iters, Rng& rng) {
  const std::size_t n = vectors.size();
  if (k < 1) throw std::invalid_argument("run_kmeans: k must be at least 1");
  if (k > n)
    throw std::invalid_argument("run_kmeans: k = " + std::to_string(k) + " exceeds document count " +
                                std::to_string(n));
  if (iters < 1) throw std::invalid_argument("run_kmeans: iteration count must be at least 1");

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::size_t> seeds;
  seeds.reserve(k);
  std::sample(all.begin(), all.end(), std::back_inserter(seeds), k, rng);

  CentroidTable centroids(k, dimension(vectors));
  for (std::size_t r = 0; r < k; ++r) centroids.assign_row(r, vectors[seeds[r]]);

  std::vector<std::size_t> labels(n, 0);

  for (std::size_t it = 0; it < iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) labels[i] = detail::nearest_centroid(centroids, vectors[i], k);
    detail::repair_empty_clusters(vectors, centroids, labels, k);
    centroids = CentroidTable::compute(vectors, labels, k);
  }
  return Clustering::from_labels(labels);
}

// (1/n) * sum of squared Euclidean distances from each document to its
// cluster's (normalized) centroid.
inline double sse(std::span<const DocVector> vectors, const Clustering& clustering) {
  if (vectors.empty()) return 0.0;
  const auto centroids = CentroidTable::compute(vectors, clustering);
  double total = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i)
    total += centroids.squared_distance(vectors[i], clustering[i]);
  return total / static_cast<double>(vectors.size());
}

namespace detail {

inline std::vector<double> dispersions(std::span<const DocVector> vectors, const Clustering& clustering,
                                       const CentroidTable& centroids) {
  std::vector<double> sum(clustering.k, 0.0);
  const auto sizes = clustering.cluster_sizes();
  for (std::size_t i = 0; i < vectors.size(); ++i)
    sum[clustering[i]] += 1.0 - centroids.similarity(vectors[i], clustering[i]);
  for (std::size_t c = 0; c < clustering.k; ++c)
    sum[c] = sizes[c] < 2 ? 0.0 : sum[c] / static_cast<double>(sizes[c]);
  return sum;
}

inline void check_cluster_id(const Clustering& clustering, std::size_t id) {
  if (id >= clustering.k)
    throw std::invalid_argument("unknown cluster id " + std::to_string(id) + " (k = " +
                                std::to_string(clustering.k) + ")");
}

}  // namespace detail

// Mean of (1 - cosine(member, centroid)); singletons are 0.
inline double dispersion(std::span<const DocVector> vectors, const Clustering& clustering, std::size_t id) {
  detail::check_cluster_id(clustering, id);
  const auto centroids = CentroidTable::compute(vectors, clustering);
  return detail::dispersions(vectors, clustering, centroids)[id];
}

inline double centroid_similarity(std::span<const DocVector> vectors, const Clustering& clustering,
                                  std::size_t id1, std::size_t id2) {
  detail::check_cluster_id(clustering, id1);
  detail::check_cluster_id(clustering, id2);
  if (id1 == id2) throw std::invalid_argument("centroid_similarity: cluster ids must differ");
  return CentroidTable::compute(vectors, clustering).similarity(id1, id2);
}

}  // namespace wsrc
