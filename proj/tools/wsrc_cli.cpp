// wsrc: cluster search-result datasets, generate planted-topic corpora, and
// re-score reports.
//
// Exit status: 0 success, 1 usage error, 2 data error.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wsrc/wsrc.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct EvalArgs {
  std::string input;
  std::string report;
  std::string output;
};

int run_cluster(const wsrc::RunConfig& config) {
  const auto report = wsrc::run_pipeline(config);
  wsrc::write_json(wsrc::report_to_json(report), config.output);
  std::cerr << "estimated_k=" << report.estimated_k;
  if (report.metrics)
    std::cerr << " actual_k=" << report.metrics->actual_k << " macro_f=" << report.metrics->macro_f;
  std::cerr << " (" << report.duration_ms << " ms)\n";
  return 0;
}

int run_gensynth(const wsrc::SyntheticSpec& spec, const std::string& output) {
  const auto corpus = wsrc::generate_synthetic(spec);
  std::ofstream out(output, std::ios::binary);
  if (!out) throw wsrc::DataError("cannot write " + output);
  wsrc::write_corpus(out, corpus);
  return 0;
}

int run_eval(const EvalArgs& args) {
  const auto corpus = wsrc::load_corpus(args.input);
  const auto report = wsrc::read_json(args.report);
  const auto clustering = wsrc::clustering_from_report(report, corpus);
  const auto metrics = wsrc::metrics_to_json(wsrc::evaluate(clustering, corpus.labels(), corpus.ids()));
  if (args.output.empty())
    std::cout << metrics.dump(2) << '\n';
  else
    wsrc::write_json(metrics, args.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search-result clustering with a cuckoo-search k-means pool and consensus clustering"};
  app.require_subcommand(1);

  wsrc::RunConfig config;
  std::string op_choice = wsrc::to_string(config.cuckoo.operation_choice);
  auto* cluster = app.add_subcommand("cluster", "Cluster a line-delimited JSON dataset and write a JSON report");
  cluster->add_option("--input", config.input, "Dataset path (JSON lines)")->required();
  cluster->add_option("--output", config.output, "Report path")->required();
  cluster->add_option("--nests", config.cuckoo.nests, "Nest population size")->capture_default_str();
  cluster->add_option("--kmeans-iters", config.cuckoo.kmeans_iters, "k-means iterations per run")->capture_default_str();
  cluster->add_option("--pa", config.cuckoo.abandon_probability, "Abandonment probability in [0.1, 0.2]")
      ->capture_default_str();
  cluster->add_option("--spawn-rounds", config.cuckoo.spawn_rounds, "Spawned nests per run")->capture_default_str();
  cluster->add_option("--ops-per-spawn", config.cuckoo.ops_per_spawn, "Split/merge operations per spawned nest")
      ->capture_default_str();
  cluster->add_option("--op-choice", op_choice, "Split/merge selection: cohesion or coin")
      ->check(CLI::IsMember({"cohesion", "coin"}))
      ->capture_default_str();
  cluster->add_option("--split-probability", config.cuckoo.split_probability, "Split probability for --op-choice coin")
      ->capture_default_str();
  cluster->add_option("--alpha", config.consensus.alpha, "Majority threshold (strict)")->capture_default_str();
  cluster->add_option("--max-passes", config.consensus.max_local_search_passes, "Local search pass limit")
      ->capture_default_str();
  cluster->add_option("--seed", config.cuckoo.seed, "Random seed")->capture_default_str();
  cluster->add_option("--stopwords", config.stopwords, "Stopword file (one word per line)");

  wsrc::SyntheticSpec spec;
  std::string synth_output;
  auto* gensynth = app.add_subcommand("gensynth", "Write a planted-topic dataset");
  gensynth->add_option("--output", synth_output, "Dataset path")->required();
  gensynth->add_option("--topics", spec.topics)->capture_default_str();
  gensynth->add_option("--docs-per-topic", spec.docs_per_topic)->capture_default_str();
  gensynth->add_option("--topic-vocab", spec.topic_vocab, "Terms per topic")->capture_default_str();
  gensynth->add_option("--shared-vocab", spec.shared_vocab, "Shared noise terms")->capture_default_str();
  gensynth->add_option("--doc-len", spec.doc_len, "Tokens per document")->capture_default_str();
  gensynth->add_option("--seed", spec.seed)->capture_default_str();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Re-score a cluster report against a labeled dataset");
  eval->add_option("--input", eval_args.input, "Labeled dataset")->required();
  eval->add_option("--report", eval_args.report, "Report written by `cluster`")->required();
  eval->add_option("--output", eval_args.output, "Metrics path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }

  try {
    if (*cluster) {
      config.cuckoo.operation_choice = wsrc::parse_operation_choice(op_choice);
      return run_cluster(config);
    }
    if (*gensynth) return run_gensynth(spec, synth_output);
    return run_eval(eval_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
}
