#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsrc/clustering.hpp"
#include "wsrc/cuckoo.hpp"
#include "wsrc/error.hpp"

namespace wsrc {

struct ConsensusConfig {
  double alpha = 0.5;  // pairs co-clustered in more than alpha * m clusterings are linked
  std::size_t max_local_search_passes = 50;

  void validate() const {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in [0, 1)");
  }

  bool operator==(const ConsensusConfig&) const = default;
};

// n x m table: entry (i, j) is document i's cluster id in clustering j.
class LabelMatrix {
 public:
  LabelMatrix(std::size_t n, std::size_t m) : n_(n), m_(m), labels_(n * m, 0) {}

  std::size_t rows() const noexcept { return n_; }
  std::size_t cols() const noexcept { return m_; }

  std::size_t& at(std::size_t doc, std::size_t clustering) { return labels_[doc * m_ + clustering]; }
  std::size_t at(std::size_t doc, std::size_t clustering) const { return labels_[doc * m_ + clustering]; }

  // Label vector of one document across all clusterings.
  std::span<const std::size_t> row(std::size_t doc) const { return {labels_.data() + doc * m_, m_}; }

  Clustering column(std::size_t clustering) const {
    std::vector<std::size_t> labels(n_);
    for (std::size_t i = 0; i < n_; ++i) labels[i] = at(i, clustering);
    return Clustering::from_labels(labels);
  }

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<std::size_t> labels_;
};

inline LabelMatrix build_label_matrix(std::span<const Clustering> clusterings) {
  if (clusterings.empty()) throw std::invalid_argument("build_label_matrix: no clusterings");
  const std::size_t n = clusterings.front().size();
  for (const auto& c : clusterings)
    if (c.size() != n)
      throw DataError("build_label_matrix: clusterings over mismatched document counts (" + std::to_string(n) +
                      " vs " + std::to_string(c.size()) + ")");
  LabelMatrix matrix(n, clusterings.size());
  for (std::size_t j = 0; j < clusterings.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) matrix.at(i, j) = clusterings[j][i];
  return matrix;
}

inline LabelMatrix build_label_matrix(const NestPool& pool) { return build_label_matrix(pool.clusterings()); }

inline std::size_t co_cluster_count(const LabelMatrix& matrix, std::size_t u, std::size_t v) {
  if (u >= matrix.rows() || v >= matrix.rows())
    throw std::out_of_range("co_cluster_count: document index out of range");
  const auto ru = matrix.row(u);
  const auto rv = matrix.row(v);
  std::size_t count = 0;
  for (std::size_t j = 0; j < ru.size(); ++j) count += ru[j] == rv[j];
  return count;
}

// Symmetric n x n co-clustering counts, diagonal = m.
class CoAssociation {
 public:
  explicit CoAssociation(const LabelMatrix& matrix)
      : n_(matrix.rows()), m_(matrix.cols()), counts_(n_ * n_, 0) {
    for (std::size_t u = 0; u < n_; ++u) {
      counts_[u * n_ + u] = static_cast<std::uint32_t>(m_);
      for (std::size_t v = u + 1; v < n_; ++v) {
        const auto c = static_cast<std::uint32_t>(co_cluster_count(matrix, u, v));
        counts_[u * n_ + v] = c;
        counts_[v * n_ + u] = c;
      }
    }
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t clusterings() const noexcept { return m_; }
  std::uint32_t operator()(std::size_t u, std::size_t v) const { return counts_[u * n_ + v]; }
  std::span<const std::uint32_t> row(std::size_t u) const { return {counts_.data() + u * n_, n_}; }

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<std::uint32_t> counts_;
};

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

inline void check_same_size(const Clustering& a, const Clustering& b) {
  if (a.size() != b.size())
    throw DataError("clusterings over mismatched document counts (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
}

}  // namespace detail

// Connected components of the graph linking u and v whenever
// co_cluster_count(u, v) / m > alpha.
inline Clustering majority_consensus(const LabelMatrix& matrix, const ConsensusConfig& config = {}) {
  config.validate();
  const std::size_t n = matrix.rows();
  const double threshold = config.alpha * static_cast<double>(matrix.cols());
  detail::DisjointSets sets(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (static_cast<double>(co_cluster_count(matrix, u, v)) > threshold) sets.unite(u, v);
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = sets.find(i);
  return Clustering::from_labels(labels);
}

// 1 iff the pair is co-clustered in exactly one of the two clusterings.
inline int pair_disagreement(const Clustering& a, const Clustering& b, std::size_t u, std::size_t v) {
  detail::check_same_size(a, b);
  if (u >= a.size() || v >= a.size()) throw std::out_of_range("pair_disagreement: document index out of range");
  return a.together(u, v) != b.together(u, v) ? 1 : 0;
}

// Number of unordered pairs on which the two clusterings disagree.
inline std::uint64_t clustering_distance(const Clustering& a, const Clustering& b) {
  detail::check_same_size(a, b);
  std::uint64_t total = 0;
  for (std::size_t u = 0; u < a.size(); ++u)
    for (std::size_t v = u + 1; v < a.size(); ++v) total += a.together(u, v) != b.together(u, v);
  return total;
}

inline std::uint64_t median_objective(const Clustering& p, std::span<const Clustering> pool) {
  std::uint64_t total = 0;
  for (const auto& q : pool) total += clustering_distance(p, q);
  return total;
}

inline std::uint64_t median_objective(const Clustering& p, const NestPool& pool) {
  return median_objective(p, pool.clusterings());
}

// Same objective from co-association counts: a pair costs m - T when p puts it
// together and T when p keeps it apart.
inline std::uint64_t median_objective(const Clustering& p, const CoAssociation& co) {
  if (p.size() != co.size()) throw DataError("median_objective: clustering and pool sizes differ");
  std::uint64_t total = 0;
  for (std::size_t u = 0; u < p.size(); ++u)
    for (std::size_t v = u + 1; v < p.size(); ++v)
      total += p.together(u, v) ? co.clusterings() - co(u, v) : co(u, v);
  return total;
}

// First-improvement local search on the median-partition objective. Each pass
// visits documents in index order and tries moving the document into every
// other existing cluster (ascending label), then into a fresh singleton, and
// takes the first strictly improving move. Stops after a pass with no move or
// after max_local_search_passes passes.
inline Clustering local_search(const Clustering& start, const CoAssociation& co, const ConsensusConfig& config = {}) {
  const std::size_t n = start.size();
  if (n != co.size()) throw DataError("local_search: clustering and pool sizes differ");
  const auto m = static_cast<std::int64_t>(co.clusterings());

  std::vector<std::size_t> labels = start.assignment;
  std::vector<std::size_t> sizes = start.cluster_sizes();
  // Cost of placing document u in cluster c, relative to u being alone:
  // sum over other members v of (m - 2 T(u, v)).
  std::vector<std::int64_t> cost(sizes.size());

  for (std::size_t pass = 0; pass < config.max_local_search_passes; ++pass) {
    bool moved = false;
    for (std::size_t u = 0; u < n; ++u) {
      cost.assign(sizes.size(), 0);
      const auto t = co.row(u);
      for (std::size_t v = 0; v < n; ++v)
        if (v != u) cost[labels[v]] += m - 2 * static_cast<std::int64_t>(t[v]);

      const std::size_t home = labels[u];
      std::size_t target = home;
      for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (c == home || sizes[c] == 0) continue;
        if (cost[c] < cost[home]) {
          target = c;
          break;
        }
      }
      if (target == home && sizes[home] > 1 && cost[home] > 0) {
        target = std::find(sizes.begin(), sizes.end(), 0) - sizes.begin();
        if (target == sizes.size()) {
          sizes.push_back(0);
          cost.push_back(0);
        }
      }
      if (target != home) {
        --sizes[home];
        ++sizes[target];
        labels[u] = target;
        moved = true;
      }
    }
    if (!moved) break;
  }
  return Clustering::from_labels(labels);
}

inline Clustering local_search(const Clustering& start, std::span<const Clustering> pool,
                               const ConsensusConfig& config = {}) {
  return local_search(start, CoAssociation(build_label_matrix(pool)), config);
}

inline Clustering local_search(const Clustering& start, const NestPool& pool, const ConsensusConfig& config = {}) {
  return local_search(start, pool.clusterings(), config);
}

}  // namespace wsrc
