#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsrc/corpus.hpp"

namespace wsrc {

// Planted-topic corpus: every topic owns a disjoint vocabulary and all topics
// share a common noise pool.
struct SyntheticSpec {
  std::size_t topics = 4;
  std::size_t docs_per_topic = 30;
  std::size_t topic_vocab = 50;
  std::size_t shared_vocab = 20;
  std::size_t doc_len = 40;
  std::uint64_t seed = 42;
  double topic_share = 0.8;

  void validate() const {
    if (topics < 1 || docs_per_topic < 1 || topic_vocab < 1 || doc_len < 1)
      throw std::invalid_argument("synthetic corpus counts must be at least 1");
  }
};

// Term spellings survive preprocessing unchanged (they end in a digit).
inline std::string topic_term(std::size_t topic, std::size_t j) {
  return "t" + std::to_string(topic) + "w" + std::to_string(j);
}
inline std::string shared_term(std::size_t j) { return "z" + std::to_string(j); }
inline std::string topic_name(std::size_t topic) { return "topic" + std::to_string(topic); }

// Each token comes from the document's topic vocabulary with probability
// topic_share and from the shared pool otherwise (always topical when the
// shared pool is empty). The first five tokens form the title. Document order
// is shuffled; output is deterministic under the seed.
inline Corpus generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::bernoulli_distribution from_topic(spec.shared_vocab == 0 ? 1.0 : spec.topic_share);
  std::uniform_int_distribution<std::size_t> topic_pick(0, spec.topic_vocab - 1);
  std::uniform_int_distribution<std::size_t> shared_pick(0, spec.shared_vocab == 0 ? 0 : spec.shared_vocab - 1);

  struct Draft {
    std::size_t topic;
    std::string title;
    std::string snippet;
  };
  std::vector<Draft> drafts;
  drafts.reserve(spec.topics * spec.docs_per_topic);
  for (std::size_t t = 0; t < spec.topics; ++t) {
    for (std::size_t d = 0; d < spec.docs_per_topic; ++d) {
      Draft draft{t, {}, {}};
      for (std::size_t w = 0; w < spec.doc_len; ++w) {
        const std::string term = from_topic(rng) ? topic_term(t, topic_pick(rng)) : shared_term(shared_pick(rng));
        std::string& field = w < 5 ? draft.title : draft.snippet;
        if (!field.empty()) field += ' ';
        field += term;
      }
      drafts.push_back(std::move(draft));
    }
  }
  std::shuffle(drafts.begin(), drafts.end(), rng);

  Corpus corpus;
  corpus.documents.reserve(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    corpus.documents.push_back(
        {"d" + std::to_string(i), std::move(drafts[i].title), std::move(drafts[i].snippet), topic_name(drafts[i].topic)});
  }
  return corpus;
}

}  // namespace wsrc
