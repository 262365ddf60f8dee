#pragma once

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "wsrc/error.hpp"
#include "wsrc/pipeline.hpp"

namespace wsrc {

using nlohmann::json;

inline std::string to_string(OperationChoice choice) {
  return choice == OperationChoice::coin ? "coin" : "cohesion";
}

inline OperationChoice parse_operation_choice(const std::string& name) {
  if (name == "coin") return OperationChoice::coin;
  if (name == "cohesion") return OperationChoice::cohesion;
  throw std::invalid_argument("unknown operation choice \"" + name + "\" (expected coin or cohesion)");
}

inline std::string to_string(NestOrigin origin) { return origin == NestOrigin::initial ? "initial" : "spawned"; }

// Hex SHA-256 of a file's bytes.
inline std::string file_sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::array<char, 1 << 16> buffer;
  while (in) {
    in.read(buffer.data(), buffer.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &length);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

inline json config_to_json(const RunConfig& c) {
  return {
      {"input", c.input},
      {"output", c.output},
      {"nests", c.cuckoo.nests},
      {"kmeans_iters", c.cuckoo.kmeans_iters},
      {"pa", c.cuckoo.abandon_probability},
      {"spawn_rounds", c.cuckoo.spawn_rounds},
      {"ops_per_spawn", c.cuckoo.ops_per_spawn},
      {"op_choice", to_string(c.cuckoo.operation_choice)},
      {"split_probability", c.cuckoo.split_probability},
      {"alpha", c.consensus.alpha},
      {"max_local_search_passes", c.consensus.max_local_search_passes},
      {"seed", c.cuckoo.seed},
      {"stopwords", c.stopwords},
  };
}

inline RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.input = j.at("input").get<std::string>();
  c.output = j.at("output").get<std::string>();
  c.cuckoo.nests = j.at("nests").get<std::size_t>();
  c.cuckoo.kmeans_iters = j.at("kmeans_iters").get<std::size_t>();
  c.cuckoo.abandon_probability = j.at("pa").get<double>();
  c.cuckoo.spawn_rounds = j.at("spawn_rounds").get<std::size_t>();
  c.cuckoo.ops_per_spawn = j.at("ops_per_spawn").get<std::size_t>();
  c.cuckoo.operation_choice = parse_operation_choice(j.at("op_choice").get<std::string>());
  c.cuckoo.split_probability = j.at("split_probability").get<double>();
  c.consensus.alpha = j.at("alpha").get<double>();
  c.consensus.max_local_search_passes = j.at("max_local_search_passes").get<std::size_t>();
  c.cuckoo.seed = j.at("seed").get<std::uint64_t>();
  c.stopwords = j.at("stopwords").get<std::string>();
  return c;
}

inline json metrics_to_json(const EvalReport& r) {
  json clusters = json::array();
  for (const auto& c : r.clusters) {
    clusters.push_back({{"cluster", c.cluster},
                        {"mapped_class", c.mapped_class},
                        {"precision", c.precision},
                        {"recall", c.recall},
                        {"f_measure", c.f_measure}});
  }
  return {{"clusters", clusters},
          {"macro_precision", r.macro_precision},
          {"macro_recall", r.macro_recall},
          {"macro_f", r.macro_f},
          {"adjusted_rand", r.adjusted_rand},
          {"estimated_k", r.estimated_k},
          {"actual_k", r.actual_k},
          {"k_difference", r.k_difference}};
}

inline json report_to_json(const RunReport& r) {
  json nests = json::array();
  for (const auto& n : r.nests) {
    nests.push_back(
        {{"clusters", n.clusters}, {"sse", n.sse}, {"generation", n.generation}, {"origin", to_string(n.origin)}});
  }
  return {
      {"config", config_to_json(r.config)},
      {"dataset_sha", r.dataset_sha},
      {"estimated_k", r.estimated_k},
      {"clusters", r.clusters},
      {"diagnostics",
       {{"nests", nests}, {"majority_objective", r.majority_objective}, {"median_objective", r.median_objective}}},
      {"metrics", r.metrics ? metrics_to_json(*r.metrics) : json(nullptr)},
      {"duration_ms", r.duration_ms},
  };
}

inline void write_json(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw DataError("failed writing " + path);
}

inline json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

// Load, vectorize, cluster, evaluate (when every document is labeled).
inline RunReport run_pipeline(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.cuckoo.validate();
  config.consensus.validate();
  const StopwordSet stopwords = config.stopwords.empty() ? default_stopwords() : load_stopwords(config.stopwords);
  const Corpus corpus = load_corpus(config.input);
  RunReport report = cluster_corpus(corpus, config, stopwords);
  report.dataset_sha = file_sha256(config.input);
  report.duration_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// Rebuilds a clustering from a report's id lists against a dataset's order.
inline Clustering clustering_from_report(const json& report, const Corpus& corpus) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < corpus.size(); ++i) index.emplace(corpus[i].id, i);
  constexpr std::size_t unassigned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> labels(corpus.size(), unassigned);
  const auto& clusters = report.at("clusters");
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (const auto& id_json : clusters[c]) {
      const auto id = id_json.get<std::string>();
      auto it = index.find(id);
      if (it == index.end()) throw DataError("report names unknown document \"" + id + "\"");
      if (labels[it->second] != unassigned) throw DataError("document \"" + id + "\" appears in two clusters");
      labels[it->second] = c;
    }
  }
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == unassigned) throw DataError("document \"" + corpus[i].id + "\" missing from report");
  return Clustering::from_labels(labels);
}

}  // namespace wsrc
