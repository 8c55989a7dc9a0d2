#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kcomp/coherence.hpp"
#include "kcomp/corpus.hpp"
#include "kcomp/embeddings.hpp"
#include "kcomp/kcomponents.hpp"
#include "kcomp/simgraph.hpp"
#include "kcomp/topics.hpp"

namespace kcomp {

/// Library version, e.g. "0.1.0".
std::string_view version() noexcept;

enum class EmbeddingSource { Load, Train };
enum class PruneStrategy { Percentile, TopM };

struct PipelineConfig {
  std::filesystem::path corpus;
  CorpusFormat corpus_format = CorpusFormat::PlainLines;
  // When set, used as the hold-back partition instead of splitting.
  std::optional<std::filesystem::path> holdout_corpus;
  std::optional<std::filesystem::path> pos_map;
  std::optional<std::filesystem::path> gold_map;
  PosMode pos_mode = PosMode::All;
  std::size_t min_count = 5;
  double holdout_fraction = 0.2;

  EmbeddingSource embedding_source = EmbeddingSource::Train;
  std::filesystem::path embeddings;
  EmbeddingFormat embeddings_format = EmbeddingFormat::Word2VecText;
  SkipGramConfig skipgram;

  PruneStrategy prune = PruneStrategy::Percentile;
  double percentile = 80.0;
  std::size_t top_m = 10;
  std::size_t node_cap = kDefaultNodeCap;
  std::size_t k_max = 3;

  RepresentativeMode representatives = RepresentativeMode::Tvs;
  std::size_t top_n = kDefaultTopN;
  std::size_t coherence_words = 10;
  std::size_t cv_window = kCvWindow;
  std::size_t min_topic_words = kMinTopicWords;
  std::size_t min_topics_valid = 6;

  std::optional<KMeansConfig> baseline;
  std::uint64_t seed = 42;

  void validate() const;
};

/// TOML document; relative paths resolve against base_dir.
PipelineConfig parse_config(std::string_view toml_text,
                            const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);

/// Applies one "section.key=value" style override (e.g. "graph.percentile",
/// "seed"), the same keys the TOML document accepts.
void apply_override(PipelineConfig& config, std::string_view key,
                    std::string_view value);

/// Every setting as (dotted key, value) pairs, in a fixed order. Feeding the
/// pairs back through apply_override reproduces the configuration.
std::vector<std::pair<std::string, std::string>> config_entries(
    const PipelineConfig& config);

/// Topics of one K level, one k-means run, or one imported topic list.
struct TopicSetResult {
  std::string name;  // "K=1", "k=8", "external"
  TopicSource method = TopicSource::KComponent;
  std::size_t parameter = 0;  // K, k, or 0
  std::vector<Topic> topics;
  CoherenceReport coherence;
  std::size_t dropped = 0;
  std::size_t topic_count = 0;
  std::size_t gold_count = 0;
  bool valid = false;
};

/// A row imported from an external tool (e.g. a density-clustering run).
struct ExternalBaseline {
  std::string approach;
  std::string hyperparameters;
  std::optional<double> cv_in;
  std::optional<double> cv_ex;
  std::optional<double> time_p_seconds;
  std::optional<std::size_t> topics;
  std::optional<std::size_t> gold;
};

struct RunStats {
  std::size_t train_segments = 0;
  std::size_t holdout_segments = 0;
  std::size_t vocabulary = 0;
  std::size_t missing_embeddings = 0;
  std::size_t embedding_duplicates = 0;
  std::size_t embedding_zero_vectors = 0;
  std::size_t graph_nodes = 0;   // after pruning
  std::size_t graph_edges = 0;
};

struct RunReport {
  std::string command;  // extract, baseline-kmeans, evaluate
  PipelineConfig config;
  std::uint64_t seed = 0;
  std::vector<TopicSetResult> results;
  double time_p_seconds = 0.0;
  RunStats stats;
  std::optional<ComponentHierarchy> hierarchy;
  std::optional<WordGraph> pruned_graph;
  std::vector<ExternalBaseline> external_baseline;
  std::vector<std::string> unmapped_topics;
};

/// Loads, filters and splits the corpora the way every pipeline stage does.
struct PreparedCorpora {
  Corpus train;
  Corpus holdout;
  Vocabulary vocab;
};
PreparedCorpora prepare_corpora(const PipelineConfig& config);

struct EmbeddingStage {
  EmbeddingTable table;
  std::size_t duplicates = 0;
  std::size_t zero_vectors = 0;
};
EmbeddingStage obtain_embeddings(const PipelineConfig& config,
                                 const PreparedCorpora& corpora);

/// K-Components: load, filter, vocabulary, embed, graph, prune, hierarchy,
/// topics, representatives, coherence. Errors carry the stage name.
RunReport run_pipeline(const PipelineConfig& config);

/// Weighted k-means baseline over the same corpora and embeddings.
RunReport run_kmeans_baseline(const PipelineConfig& config);

/// Scores externally produced topics against the configured corpora.
RunReport evaluate_topics(const PipelineConfig& config, std::vector<Topic> topics);

/// topic_id -> gold label, as written by a human annotator.
using GoldMapping = std::vector<std::pair<std::string, std::string>>;

GoldMapping parse_gold_mapping(std::istream& in);
GoldMapping load_gold_mapping(const std::filesystem::path& path);

/// Attaches labels; gold_count = distinct labels per result. Unknown topic
/// ids throw; unlabeled topics are listed in report.unmapped_topics.
void map_to_gold(RunReport& report, const GoldMapping& mapping);

std::vector<ExternalBaseline> parse_external_baselines(std::istream& in);

// Report serialization (report.cpp)
std::string topics_json(const RunReport& report);
std::string run_json(const RunReport& report);
std::string coherence_csv(const RunReport& report);
std::string summary_table(const RunReport& report);

/// Writes topics.json, coherence.csv, run.json (plus hierarchy.json and
/// graph.tsv when present) via write-then-rename.
void emit_report(const RunReport& report, const std::filesystem::path& dir,
                 bool include_graph = false);

/// Reads a run.json written by emit_report.
RunReport load_report(const std::filesystem::path& run_dir);

/// Reads a topics.json array.
std::vector<Topic> load_topics(const std::filesystem::path& path);

}  // namespace kcomp
