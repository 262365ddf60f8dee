#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wsrc/corpus.hpp"
#include "wsrc/error.hpp"
#include "wsrc/text.hpp"

namespace wsrc {

using TermId = std::uint32_t;

// Terms are indexed 0..T-1 in order of first appearance in the corpus.
struct Vocabulary {
  std::unordered_map<std::string, TermId> index;
  std::vector<std::string> terms;
  std::vector<std::size_t> document_frequency;

  std::size_t size() const noexcept { return terms.size(); }

  std::optional<TermId> find(const std::string& term) const {
    auto it = index.find(term);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

// Sparse non-negative term weights, sorted by term id. Either all-zero (no
// entries) or unit L2 norm.
class DocVector {
 public:
  using Entry = std::pair<TermId, double>;

  DocVector() = default;

  // Drops non-positive weights, merges duplicate ids and L2-normalizes.
  static DocVector normalized(std::vector<Entry> entries) {
    std::erase_if(entries, [](const Entry& e) { return !(e.second > 0.0); });
    std::sort(entries.begin(), entries.end());
    std::vector<Entry> merged;
    for (const auto& e : entries) {
      if (!merged.empty() && merged.back().first == e.first)
        merged.back().second += e.second;
      else
        merged.push_back(e);
    }
    double sq = 0.0;
    for (const auto& e : merged) sq += e.second * e.second;
    DocVector v;
    if (sq > 0.0) {
      const double inv = 1.0 / std::sqrt(sq);
      for (auto& e : merged) e.second *= inv;
      v.entries_ = std::move(merged);
    }
    return v;
  }

  std::span<const Entry> entries() const noexcept { return entries_; }
  bool is_zero() const noexcept { return entries_.empty(); }

  double weight(TermId term) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), term,
                               [](const Entry& e, TermId t) { return e.first < t; });
    return (it != entries_.end() && it->first == term) ? it->second : 0.0;
  }

  double norm() const {
    double sq = 0.0;
    for (const auto& e : entries_) sq += e.second * e.second;
    return std::sqrt(sq);
  }

  // One past the largest term id present.
  std::size_t extent() const noexcept { return entries_.empty() ? 0 : entries_.back().first + 1; }

  bool operator==(const DocVector&) const = default;

 private:
  std::vector<Entry> entries_;
};

struct VectorizedCorpus {
  Vocabulary vocabulary;
  std::vector<DocVector> vectors;
};

// Tokens of title and snippet joined with a space.
inline std::vector<std::string> document_tokens(const RawDocument& doc, const StopwordSet& stopwords) {
  return preprocess(doc.title + " " + doc.snippet, stopwords);
}

// weight(t, d) = tf(t, d) * ln(n / df(t)), then L2-normalized. Terms present in
// every document keep their vocabulary slot but get weight zero.
inline VectorizedCorpus vectorize_corpus(const Corpus& corpus,
                                         const StopwordSet& stopwords = default_stopwords()) {
  if (corpus.empty()) throw DataError("empty corpus");
  VectorizedCorpus out;
  auto& vocab = out.vocabulary;

  std::vector<std::unordered_map<TermId, std::size_t>> tf(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (auto& token : document_tokens(corpus[d], stopwords)) {
      auto [it, inserted] = vocab.index.try_emplace(token, static_cast<TermId>(vocab.terms.size()));
      if (inserted) {
        vocab.terms.push_back(std::move(token));
        vocab.document_frequency.push_back(0);
      }
      if (tf[d][it->second]++ == 0) ++vocab.document_frequency[it->second];
    }
  }

  const double n = static_cast<double>(corpus.size());
  out.vectors.reserve(corpus.size());
  for (const auto& counts : tf) {
    std::vector<DocVector::Entry> raw;
    raw.reserve(counts.size());
    for (const auto& [term, count] : counts) {
      const double idf = std::log(n / static_cast<double>(vocab.document_frequency[term]));
      raw.emplace_back(term, static_cast<double>(count) * idf);
    }
    out.vectors.push_back(DocVector::normalized(std::move(raw)));
  }
  return out;
}

// Dot product of two unit vectors, clamped to [0, 1]; 0 if either is zero.
inline double cosine(const DocVector& a, const DocVector& b) {
  auto ea = a.entries();
  auto eb = b.entries();
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].first < eb[j].first) {
      ++i;
    } else if (eb[j].first < ea[i].first) {
      ++j;
    } else {
      dot += ea[i].second * eb[j].second;
      ++i;
      ++j;
    }
  }
  return std::clamp(dot, 0.0, 1.0);
}

}  // namespace wsrc
