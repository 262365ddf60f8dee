// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>
#include <sys/wait.h>

#include "oracles.hpp"
#include "wsrc/wsrc.hpp"

using namespace wsrc;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %d %-28s %s  %s\n", id, name, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Corpus planted_corpus(std::size_t topics, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.topics = topics;
  spec.docs_per_topic = 30;
  spec.topic_vocab = 50;
  spec.shared_vocab = 20;
  spec.doc_len = 40;
  spec.seed = seed * 1000 + topics;
  return generate_synthetic(spec);
}

struct RecoveryStats {
  std::size_t exact = 0;
  std::size_t quality = 0;  // exact k with macro-F and ARI over threshold
  std::size_t runs = 0;
  double slowest = 0.0;
  std::vector<std::size_t> quality_per_c;
};

RecoveryStats recovery(std::size_t spawn_rounds) {
  const auto stopwords = default_stopwords();
  RecoveryStats stats;
  for (std::size_t c = 3; c <= 6; ++c) {
    std::size_t good = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Corpus corpus = planted_corpus(c, seed);
      RunConfig config;
      config.cuckoo.seed = seed;
      config.cuckoo.spawn_rounds = spawn_rounds;
      const auto start = Clock::now();
      const RunReport run = cluster_corpus(corpus, config, stopwords);
      stats.slowest = std::max(stats.slowest, seconds_since(start));
      ++stats.runs;
      if (run.estimated_k != c || run.metrics->k_difference != 0) continue;
      ++stats.exact;
      if (run.metrics->macro_f >= 0.95 && run.metrics->adjusted_rand >= 0.90) {
        ++stats.quality;
        ++good;
      }
    }
    stats.quality_per_c.push_back(good);
  }
  return stats;
}

void criterion_exact_k(const RecoveryStats& stats) {
  bool pass = stats.slowest < 10.0;
  std::string per_c;
  for (std::size_t i = 0; i < stats.quality_per_c.size(); ++i) {
    pass = pass && stats.quality_per_c[i] >= 9;
    per_c += fmt("c=%zu:%zu/10 ", i + 3, stats.quality_per_c[i]);
  }
  report(1, "exact-k recovery", pass, per_c + fmt("slowest run %.2fs", stats.slowest));
}

void criterion_dmoz() {
  const char* dir = std::getenv("WSRC_DMOZ_DIR");
  if (dir == nullptr) {
    std::printf("criterion 2 %-28s NOT RUNNABLE  set WSRC_DMOZ_DIR to a directory with ds1..ds5.jsonl\n",
                "paper datasets");
    return;
  }
  const std::size_t expected[] = {4, 6, 5, 4, 6};
  bool pass = true;
  std::string detail;
  for (int ds = 0; ds < 5; ++ds) {
    const std::string path = std::string(dir) + "/ds" + std::to_string(ds + 1) + ".jsonl";
    const Corpus corpus = load_corpus(path);
    std::size_t hits = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      RunConfig config;
      config.cuckoo.seed = seed;
      hits += cluster_corpus(corpus, config, default_stopwords()).estimated_k == expected[ds];
    }
    pass = pass && hits >= 3;
    detail += fmt("ds%d:%zu/5 ", ds + 1, hits);
  }
  report(2, "paper datasets", pass, detail);
}

void criterion_median_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> pick_n(2, 8), pick_k(1, 4);
  std::size_t optimal = 0, regressions = 0;
  double gap_sum = 0.0;
  constexpr int kInstances = 100;
  for (int t = 0; t < kInstances; ++t) {
    const std::size_t n = pick_n(rng);
    std::vector<Clustering> pool;
    for (int j = 0; j < 3; ++j) pool.push_back(testing::random_clustering(n, pick_k(rng), rng));
    const LabelMatrix matrix = build_label_matrix(pool);
    const CoAssociation co(matrix);
    const Clustering start_partition = majority_consensus(matrix);
    const Clustering found = local_search(start_partition, co);
    const auto found_cost = median_objective(found, pool);
    if (found_cost > median_objective(start_partition, pool)) ++regressions;
    std::uint64_t best = UINT64_MAX;
    testing::for_each_partition(n, [&](const std::vector<std::size_t>& labels) {
      best = std::min(best, median_objective(Clustering::from_labels(labels), pool));
    });
    if (found_cost == best) ++optimal;
    gap_sum += best == 0 ? (found_cost == 0 ? 0.0 : 1.0) : double(found_cost - best) / double(best);
  }
  const double elapsed = seconds_since(start);
  const bool pass = regressions == 0 && optimal * 100 >= 70 * kInstances && elapsed < 60.0;
  report(3, "median-partition oracle", pass,
         fmt("optimal %zu/%d, regressions %zu, mean relative gap %.4f, %.2fs", optimal, kInstances, regressions,
             gap_sum / kInstances, elapsed));
}

bool metric_holds(const Clustering& a, const Clustering& b, const Clustering& c) {
  const auto ab = clustering_distance(a, b), bc = clustering_distance(b, c), ac = clustering_distance(a, c);
  if ((ab == 0) != (a == b)) return false;
  if (ab != clustering_distance(b, a)) return false;
  return ac <= ab + bc;
}

void criterion_metric() {
  const auto parts = testing::all_partitions(4);
  std::size_t triples = 0, violations = 0;
  for (const auto& a : parts)
    for (const auto& b : parts)
      for (const auto& c : parts) {
        ++triples;
        violations += !metric_holds(a, b, c);
      }
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick_k(1, 20);
  for (int t = 0; t < 1000; ++t) {
    const auto a = testing::random_clustering(20, pick_k(rng), rng);
    const auto b = testing::random_clustering(20, pick_k(rng), rng);
    const auto c = testing::random_clustering(20, pick_k(rng), rng);
    violations += !metric_holds(a, b, c) || !metric_holds(a, a, b);
  }
  report(4, "distance is a metric", parts.size() == 15 && triples == 3375 && violations == 0,
         fmt("%zu exhaustive triples at n=4 + 1000 random at n=20, %zu violations", triples, violations));
}

void criterion_invariance() {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick_n(2, 30), pick_m(2, 7), pick_k(1, 6);
  std::uniform_real_distribution<double> pick_alpha(0.0, 0.99);
  std::size_t broken = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = pick_n(rng), m = pick_m(rng);
    ConsensusConfig config;
    config.alpha = pick_alpha(rng);
    std::vector<Clustering> pool;
    for (std::size_t j = 0; j < m; ++j) pool.push_back(testing::random_clustering(n, pick_k(rng), rng));
    const Clustering base = majority_consensus(build_label_matrix(pool), config);

    std::vector<Clustering> reordered = pool;
    std::shuffle(reordered.begin(), reordered.end(), rng);
    LabelMatrix relabeled = build_label_matrix(reordered);
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 100);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::size_t i = 0; i < n; ++i) relabeled.at(i, j) = perm[relabeled.at(i, j)];
    }
    broken += !(majority_consensus(build_label_matrix(reordered), config) == base);
    broken += !(majority_consensus(relabeled, config) == base);

    const std::vector<Clustering> identical(m, pool.front());
    broken += !(majority_consensus(build_label_matrix(identical), config) == pool.front());
  }
  report(5, "consensus invariances", broken == 0, fmt("100 pools, %zu mismatches", broken));
}

void criterion_formulas() {
  std::vector<std::string> problems;
  const std::size_t ns[] = {1, 2, 100, 129}, ks[] = {1, 2, 11, 12};
  for (int i = 0; i < 4; ++i)
    if (initial_k(ns[i]) != ks[i]) problems.push_back(fmt("initial_k(%zu)=%zu", ns[i], initial_k(ns[i])));

  std::mt19937_64 rng(3);
  const auto vectors = testing::random_vectors(25, 40, 6, rng);
  Rng kmeans_rng(5);
  const Clustering all = run_kmeans(vectors, vectors.size(), 4, kmeans_rng);
  if (sse(vectors, all) > 1e-12) problems.push_back(fmt("sse at k=n is %g", sse(vectors, all)));

  std::size_t cosine_bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto a = testing::random_vector(30, 1 + t % 8, rng), b = testing::random_vector(30, 1 + t % 5, rng);
    const double ab = cosine(a, b);
    cosine_bad += ab < 0.0 || ab > 1.0 || ab != cosine(b, a) || std::abs(cosine(a, a) - 1.0) > 1e-12;
  }
  if (cosine_bad) problems.push_back(fmt("%zu cosine violations", cosine_bad));

  Corpus corpus;
  corpus.documents.push_back({"a", "jaguar speed", "", std::nullopt});
  corpus.documents.push_back({"b", "jaguar habitat", "", std::nullopt});
  corpus.documents.push_back({"c", "jaguar engine", "", std::nullopt});
  const auto vectorized = vectorize_corpus(corpus, default_stopwords());
  const auto term = vectorized.vocabulary.find("jaguar");
  if (!term) {
    problems.push_back("jaguar missing from vocabulary");
  } else {
    for (const auto& v : vectorized.vectors)
      if (v.weight(*term) != 0.0) problems.push_back("df=n term has nonzero weight");
  }

  std::string detail = "initial_k, sse(k=n), 1000 cosine pairs, df=n weight";
  for (const auto& p : problems) detail += "; " + p;
  report(6, "formula checks", problems.empty(), detail);
}

std::string without_duration(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string line, out;
  while (std::getline(in, line))
    if (line.find("\"duration_ms\"") == std::string::npos) out += line + '\n';
  return out;
}

void criterion_determinism() {
  const fs::path dir = fs::temp_directory_path() / ("wsrc_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string data = (dir / "data.jsonl").string(), out = (dir / "report.json").string();
  {
    std::ofstream f(data, std::ios::binary);
    write_corpus(f, planted_corpus(4, 3));
  }
  const std::string cmd = std::string(WSRC_CLI_PATH) + " cluster --input " + data + " --output " + out + " --seed 9 > /dev/null 2>&1";
  const int first = std::system(cmd.c_str());
  const std::string a = without_duration(out);
  const int second = std::system(cmd.c_str());
  const std::string b = without_duration(out);
  fs::remove_all(dir);
  const bool ran = first == 0 && second == 0;
  report(7, "determinism", ran && !a.empty() && a == b,
         ran ? fmt("%zu bytes compared", a.size()) : fmt("cli exit statuses %d, %d", first, second));
}

void criterion_ablation(const RecoveryStats& defaults) {
  const RecoveryStats ablated = recovery(0);
  report(8, "ablation ordering", ablated.exact <= defaults.exact,
         fmt("exact-k without split/merge %zu/%zu, default %zu/%zu", ablated.exact, ablated.runs, defaults.exact,
             defaults.runs));
}

}  // namespace

int main() {
  try {
    const RecoveryStats defaults = recovery(CuckooConfig{}.spawn_rounds);
    criterion_exact_k(defaults);
    criterion_dmoz();
    criterion_median_oracle();
    criterion_metric();
    criterion_invariance();
    criterion_formulas();
    criterion_determinism();
    criterion_ablation(defaults);
  } catch (const std::exception& e) {
    std::printf("acceptance harness aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
