#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace wsrc {

// A partition of document indices 0..n-1. Labels are canonical: cluster ids
// are numbered 0..k-1 in order of first appearance, so two Clustering values
// compare equal iff they describe the same partition.
struct Clustering {
  std::vector<std::size_t> assignment;
  std::size_t k = 0;

  std::size_t size() const noexcept { return assignment.size(); }
  std::size_t operator[](std::size_t doc) const { return assignment[doc]; }

  // Relabels arbitrary cluster labels canonically.
  static Clustering from_labels(std::span<const std::size_t> labels) {
    Clustering out;
    out.assignment.resize(labels.size());
    std::unordered_map<std::size_t, std::size_t> remap;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto [it, inserted] = remap.try_emplace(labels[i], remap.size());
      out.assignment[i] = it->second;
    }
    out.k = remap.size();
    return out;
  }

  static Clustering single_cluster(std::size_t n) {
    return from_labels(std::vector<std::size_t>(n, 0));
  }

  static Clustering singletons(std::size_t n) {
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = i;
    return from_labels(labels);
  }

  // Member lists per cluster id, each in ascending document order.
  std::vector<std::vector<std::size_t>> members() const {
    std::vector<std::vector<std::size_t>> out(k);
    for (std::size_t i = 0; i < assignment.size(); ++i) out[assignment[i]].push_back(i);
    return out;
  }

  std::vector<std::size_t> cluster_sizes() const {
    std::vector<std::size_t> out(k, 0);
    for (std::size_t label : assignment) ++out[label];
    return out;
  }

  bool together(std::size_t u, std::size_t v) const { return assignment[u] == assignment[v]; }

  bool operator==(const Clustering&) const = default;
};

// Checks the partition invariants: ids in 0..k-1, every id used, and labels
// in canonical first-appearance order.
inline bool is_valid(const Clustering& c) {
  if (c.assignment.empty()) return c.k == 0;
  std::size_t next = 0;
  for (std::size_t label : c.assignment) {
    if (label > next) return false;
    if (label == next) ++next;
  }
  return next == c.k;
}

}  // namespace wsrc
