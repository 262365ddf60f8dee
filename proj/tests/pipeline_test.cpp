#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "wsrc/wsrc.hpp"

namespace wsrc {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("wsrc_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

void write_dataset(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  write_corpus(out, corpus);
}

int cli(const std::string& args) {
  const int status = std::system((std::string(WSRC_CLI_PATH) + " " + args + " 2>/dev/null >/dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Synthetic, CountsAndLabels) {
  SyntheticSpec spec;
  spec.topics = 3;
  spec.docs_per_topic = 10;
  const auto corpus = generate_synthetic(spec);
  EXPECT_EQ(corpus.size(), 30u);
  std::set<std::string> classes, ids;
  for (const auto& d : corpus.documents) {
    classes.insert(*d.label);
    ids.insert(d.id);
  }
  EXPECT_EQ(classes.size(), 3u);
  EXPECT_EQ(ids.size(), 30u);
}

TEST(Synthetic, DisjointTopicsWithoutSharedPool) {
  SyntheticSpec spec;
  spec.topics = 3;
  spec.docs_per_topic = 8;
  spec.shared_vocab = 0;
  const auto corpus = generate_synthetic(spec);
  const auto v = vectorize_corpus(corpus);
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = 0; j < corpus.size(); ++j)
      if (corpus[i].label != corpus[j].label) { EXPECT_EQ(cosine(v.vectors[i], v.vectors[j]), 0.0); }
}

TEST(Synthetic, DeterministicUnderSeed) {
  SyntheticSpec spec;
  std::ostringstream a, b, c;
  write_corpus(a, generate_synthetic(spec));
  write_corpus(b, generate_synthetic(spec));
  spec.seed = 43;
  write_corpus(c, generate_synthetic(spec));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str(), c.str());
  SyntheticSpec bad;
  bad.topics = 0;
  EXPECT_THROW(generate_synthetic(bad), std::invalid_argument);
}

TEST(Pipeline, RecoversPlantedTopics) {
  SyntheticSpec spec;
  spec.topics = 4;
  const auto corpus = generate_synthetic(spec);
  const auto report = cluster_corpus(corpus, RunConfig{}, default_stopwords());
  ASSERT_TRUE(report.metrics.has_value());
  EXPECT_EQ(report.estimated_k, 4u);
  EXPECT_EQ(report.metrics->k_difference, 0u);
  EXPECT_LE(report.median_objective, report.majority_objective);
  EXPECT_EQ(report.nests.size(), 5u);
}

TEST(Pipeline, SingleDocument) {
  Corpus corpus;
  corpus.documents.push_back({"only", "jaguar", "cat", std::nullopt});
  const auto report = cluster_corpus(corpus, RunConfig{}, default_stopwords());
  EXPECT_EQ(report.estimated_k, 1u);
  ASSERT_EQ(report.clusters.size(), 1u);
  EXPECT_EQ(report.clusters[0], std::vector<std::string>{"only"});
  EXPECT_FALSE(report.metrics.has_value());
}

TEST(Pipeline, ReportPartitionsInputIds) {
  SyntheticSpec spec;
  spec.topics = 3;
  spec.docs_per_topic = 12;
  const auto corpus = generate_synthetic(spec);
  const auto report = cluster_corpus(corpus, RunConfig{}, default_stopwords());
  std::multiset<std::string> seen;
  for (const auto& cluster : report.clusters) seen.insert(cluster.begin(), cluster.end());
  const auto ids = corpus.ids();
  EXPECT_EQ(seen, std::multiset<std::string>(ids.begin(), ids.end()));
}

TEST(Report, ConfigEchoRoundTrips) {
  RunConfig config;
  config.input = "in.jsonl";
  config.output = "out.json";
  config.cuckoo.nests = 7;
  config.cuckoo.abandon_probability = 0.12;
  config.cuckoo.operation_choice = OperationChoice::coin;
  config.cuckoo.seed = 123456789012345ull;
  config.consensus.alpha = 0.6;
  config.stopwords = "stop.txt";
  EXPECT_EQ(config_from_json(json::parse(config_to_json(config).dump())), config);
}

TEST(Report, RunPipelineIsDeterministicApartFromDuration) {
  TempDir dir;
  SyntheticSpec spec;
  spec.topics = 3;
  write_dataset(generate_synthetic(spec), dir.file("data.jsonl"));
  RunConfig config;
  config.input = dir.file("data.jsonl");
  config.output = dir.file("report.json");
  auto a = report_to_json(run_pipeline(config));
  auto b = report_to_json(run_pipeline(config));
  EXPECT_EQ(a["dataset_sha"].get<std::string>().size(), 64u);
  a.erase("duration_ms");
  b.erase("duration_ms");
  EXPECT_EQ(a.dump(), b.dump());
  for (const char* key : {"config", "estimated_k", "clusters", "diagnostics", "metrics"}) EXPECT_TRUE(a.contains(key));
}

TEST(Report, ClusteringFromReportValidatesIds) {
  Corpus corpus;
  for (const char* id : {"a", "b", "c"}) corpus.documents.push_back({id, "t", "s", "x"});
  auto from = [&](const char* clusters) { return clustering_from_report(json::parse(clusters), corpus); };
  EXPECT_EQ(from(R"({"clusters": [["c", "a"], ["b"]]})"), Clustering::from_labels(std::vector<std::size_t>{0, 1, 0}));
  EXPECT_THROW(from(R"({"clusters": [["a", "zz"], ["b", "c"]]})"), DataError);  // unknown id
  EXPECT_THROW(from(R"({"clusters": [["a", "b"], ["b", "c"]]})"), DataError);   // duplicate
  EXPECT_THROW(from(R"({"clusters": [["a", "b"]]})"), DataError);               // missing
}

TEST(Report, FileSha256) {
  TempDir dir;
  std::ofstream(dir.file("abc.txt"), std::ios::binary) << "abc";
  EXPECT_EQ(file_sha256(dir.file("abc.txt")), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, SubcommandsAndExitStatuses) {
  TempDir dir;
  const auto data = dir.file("data.jsonl");
  const auto report = dir.file("report.json");
  ASSERT_EQ(cli("gensynth --output " + data + " --topics 3 --docs-per-topic 10"), 0);
  EXPECT_EQ(load_corpus(data).size(), 30u);
  ASSERT_EQ(cli("cluster --input " + data + " --output " + report), 0);
  const auto written = read_json(report);
  EXPECT_EQ(written["estimated_k"], 3);
  EXPECT_EQ(written["config"]["nests"], 5);
  EXPECT_EQ(cli("eval --input " + data + " --report " + report + " --output " + dir.file("m.json")), 0);
  EXPECT_EQ(read_json(dir.file("m.json"))["k_difference"], 0);

  EXPECT_EQ(cli("cluster --output " + report), 1);                        // missing --input
  EXPECT_EQ(cli("bogus"), 1);                                             // unknown subcommand
  EXPECT_EQ(cli("cluster --input " + data + " --output " + report + " --pa 0.5"), 1);
  EXPECT_EQ(cli("cluster --input " + dir.file("missing.jsonl") + " --output " + report), 2);
  std::ofstream(dir.file("bad.jsonl")) << "{not json}\n";
  EXPECT_EQ(cli("cluster --input " + dir.file("bad.jsonl") + " --output " + report), 2);
}

TEST(Cli, StopwordOverride) {
  TempDir dir;
  const auto data = dir.file("data.jsonl");
  std::ofstream(data) << R"({"id":"a","title":"the puma"})" << '\n' << R"({"id":"b","title":"the lion"})" << '\n';
  std::ofstream(dir.file("stop.txt")) << "puma\n";
  EXPECT_EQ(cli("cluster --input " + data + " --output " + dir.file("r.json") + " --stopwords " + dir.file("stop.txt")), 0);
  EXPECT_EQ(read_json(dir.file("r.json"))["config"]["stopwords"], dir.file("stop.txt"));
  EXPECT_EQ(cli("cluster --input " + data + " --output " + dir.file("r.json") + " --stopwords " + dir.file("none.txt")), 2);
}

}  // namespace
}  // namespace wsrc
