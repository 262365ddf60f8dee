#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsrc/clustering.hpp"
#include "wsrc/error.hpp"

namespace wsrc {

struct ClusterScore {
  std::size_t cluster = 0;
  std::string mapped_class;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;

  bool operator==(const ClusterScore&) const = default;
};

struct EvalReport {
  std::vector<ClusterScore> clusters;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f = 0.0;
  double adjusted_rand = 0.0;
  std::size_t estimated_k = 0;
  std::size_t actual_k = 0;
  std::size_t k_difference = 0;
};

inline std::size_t k_difference(std::int64_t estimated, std::int64_t actual) {
  if (estimated < 1 || actual < 1) throw std::invalid_argument("k_difference: cluster counts must be positive");
  return static_cast<std::size_t>(estimated > actual ? estimated - actual : actual - estimated);
}

namespace detail {

inline std::vector<std::string> require_labels(std::span<const std::optional<std::string>> gold,
                                               std::span<const std::string> ids, std::size_t n) {
  if (gold.size() != n)
    throw DataError("gold labels cover " + std::to_string(gold.size()) + " documents, clustering has " +
                    std::to_string(n));
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!gold[i]) {
      const std::string name = i < ids.size() ? ids[i] : "#" + std::to_string(i);
      throw DataError("document \"" + name + "\" has no gold label");
    }
    out.push_back(*gold[i]);
  }
  return out;
}

inline double choose2(std::uint64_t x) {
  return x < 2 ? 0.0 : static_cast<double>(x) * static_cast<double>(x - 1) / 2.0;
}

}  // namespace detail

// Gold labels as a clustering (classes numbered by first appearance).
inline Clustering gold_partition(std::span<const std::string> labels) {
  std::map<std::string, std::size_t> index;
  std::vector<std::size_t> raw(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) raw[i] = index.try_emplace(labels[i], index.size()).first->second;
  return Clustering::from_labels(raw);
}

// Adjusted Rand index from the contingency table. Returns 1 when both
// partitions are trivial in the same way (expected index equals maximum).
inline double adjusted_rand(const Clustering& a, const Clustering& b) {
  if (a.size() != b.size()) throw DataError("adjusted_rand: partitions over different document counts");
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> cells;
  for (std::size_t i = 0; i < a.size(); ++i) ++cells[{a[i], b[i]}];
  double index = 0.0;
  for (const auto& [key, count] : cells) index += detail::choose2(count);
  double sum_a = 0.0, sum_b = 0.0;
  for (auto s : a.cluster_sizes()) sum_a += detail::choose2(s);
  for (auto s : b.cluster_sizes()) sum_b += detail::choose2(s);
  const double total = detail::choose2(a.size());
  const double expected = total > 0.0 ? sum_a * sum_b / total : 0.0;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

inline double adjusted_rand(const Clustering& clustering, std::span<const std::optional<std::string>> gold,
                            std::span<const std::string> ids = {}) {
  const auto labels = detail::require_labels(gold, ids, clustering.size());
  return adjusted_rand(clustering, gold_partition(labels));
}

// Maps each cluster to its majority gold class (ties: lexicographically
// smallest class) and scores it against that class.
inline EvalReport evaluate(const Clustering& clustering, std::span<const std::optional<std::string>> gold,
                           std::span<const std::string> ids = {}) {
  const auto labels = detail::require_labels(gold, ids, clustering.size());

  std::map<std::string, std::size_t> class_sizes;
  for (const auto& l : labels) ++class_sizes[l];
  std::vector<std::map<std::string, std::size_t>> overlap(clustering.k);
  for (std::size_t i = 0; i < labels.size(); ++i) ++overlap[clustering[i]][labels[i]];
  const auto sizes = clustering.cluster_sizes();

  EvalReport report;
  for (std::size_t c = 0; c < clustering.k; ++c) {
    ClusterScore score;
    score.cluster = c;
    std::size_t hits = 0;
    for (const auto& [cls, count] : overlap[c]) {
      if (count > hits) {  // std::map iterates classes in ascending order
        hits = count;
        score.mapped_class = cls;
      }
    }
    score.precision = static_cast<double>(hits) / static_cast<double>(sizes[c]);
    score.recall = static_cast<double>(hits) / static_cast<double>(class_sizes[score.mapped_class]);
    const double pr = score.precision + score.recall;
    score.f_measure = pr > 0.0 ? 2.0 * score.precision * score.recall / pr : 0.0;
    report.macro_precision += score.precision;
    report.macro_recall += score.recall;
    report.macro_f += score.f_measure;
    report.clusters.push_back(std::move(score));
  }
  if (clustering.k > 0) {
    const auto k = static_cast<double>(clustering.k);
    report.macro_precision /= k;
    report.macro_recall /= k;
    report.macro_f /= k;
  }
  report.adjusted_rand = adjusted_rand(clustering, gold_partition(labels));
  report.estimated_k = clustering.k;
  report.actual_k = class_sizes.size();
  report.k_difference = k_difference(static_cast<std::int64_t>(report.estimated_k),
                                     static_cast<std::int64_t>(report.actual_k));
  return report;
}

}  // namespace wsrc
