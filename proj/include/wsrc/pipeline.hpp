#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wsrc/consensus.hpp"
#include "wsrc/corpus.hpp"
#include "wsrc/cuckoo.hpp"
#include "wsrc/eval.hpp"
#include "wsrc/kmeans.hpp"
#include "wsrc/text.hpp"
#include "wsrc/vectorize.hpp"

namespace wsrc {

struct RunConfig {
  std::string input;
  std::string output;
  CuckooConfig cuckoo;
  ConsensusConfig consensus;
  std::string stopwords;  // empty: built-in list

  bool operator==(const RunConfig&) const = default;
};

struct NestDiagnostic {
  std::size_t clusters = 0;
  double sse = 0.0;
  std::size_t generation = 0;
  NestOrigin origin = NestOrigin::initial;
};

struct RunReport {
  RunConfig config;
  std::string dataset_sha;
  std::size_t estimated_k = 0;
  std::vector<std::vector<std::string>> clusters;  // document ids per final cluster
  std::vector<NestDiagnostic> nests;
  std::uint64_t majority_objective = 0;  // median objective before local search
  std::uint64_t median_objective = 0;    // median objective of the final clustering
  std::optional<EvalReport> metrics;
  std::int64_t duration_ms = 0;
};

struct PipelineResult {
  NestPool pool;
  Clustering majority;
  Clustering final_clustering;
  std::uint64_t majority_objective = 0;
  std::uint64_t median_objective = 0;
};

// Steps after vectorization: cuckoo pool, majority vote, local search.
inline PipelineResult cluster_vectors(std::span<const DocVector> vectors, const CuckooConfig& cuckoo,
                                      const ConsensusConfig& consensus) {
  cuckoo.validate();
  consensus.validate();
  Rng rng(cuckoo.seed);
  PipelineResult out;
  out.pool = evolve_pool(vectors, init_pool(vectors, cuckoo, rng), cuckoo, rng);
  const LabelMatrix matrix = build_label_matrix(out.pool);
  const CoAssociation co(matrix);
  out.majority = majority_consensus(matrix, consensus);
  out.final_clustering = local_search(out.majority, co, consensus);
  out.majority_objective = median_objective(out.majority, co);
  out.median_objective = median_objective(out.final_clustering, co);
  return out;
}

// Full run on an in-memory corpus. dataset_sha and duration are left for the
// caller (see run_pipeline).
inline RunReport cluster_corpus(const Corpus& corpus, const RunConfig& config, const StopwordSet& stopwords) {
  const auto vectorized = vectorize_corpus(corpus, stopwords);
  const auto& vectors = vectorized.vectors;
  PipelineResult result = cluster_vectors(vectors, config.cuckoo, config.consensus);

  RunReport report;
  report.config = config;
  report.estimated_k = result.final_clustering.k;
  for (const auto& members : result.final_clustering.members()) {
    auto& ids = report.clusters.emplace_back();
    for (std::size_t i : members) ids.push_back(corpus[i].id);
  }
  for (const auto& nest : result.pool.nests)
    report.nests.push_back({nest.clustering.k, sse(vectors, nest.clustering), nest.generation, nest.origin});
  report.majority_objective = result.majority_objective;
  report.median_objective = result.median_objective;
  if (corpus.has_labels()) report.metrics = evaluate(result.final_clustering, corpus.labels(), corpus.ids());
  return report;
}

}  // namespace wsrc
