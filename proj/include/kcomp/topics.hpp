#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kcomp/corpus.hpp"
#include "kcomp/embeddings.hpp"
#include "kcomp/kcomponents.hpp"
#include "kcomp/simgraph.hpp"

namespace kcomp {

enum class TopicSource { KComponent, KMeans, External };

std::string_view to_string(TopicSource source);
TopicSource parse_topic_source(std::string_view name);

struct Topic {
  std::string id;
  TopicSource source = TopicSource::KComponent;
  std::size_t level = 0;       // K for k-component topics
  std::size_t cluster_id = 0;  // for k-means topics
  NodeSet members;                           // sorted
  std::vector<std::string> ranking;          // all members, best first
  std::vector<std::string> representatives;  // first top_n of ranking
  std::optional<std::string> label;          // gold topic
};

constexpr std::size_t kMinTopicWords = 6;
constexpr std::size_t kDefaultTopN = 5;

struct TopicExtraction {
  std::vector<Topic> topics;
  std::size_t dropped = 0;  // groups below the word minimum
};

/// One KComponent topic per component with at least min_words members.
/// Ranking is left empty; see assign_representatives.
TopicExtraction components_to_topics(const std::vector<NodeSet>& components,
                                     std::size_t level,
                                     std::size_t min_words = kMinTopicWords);

/// Members by degree inside their induced subgraph, then weighted degree,
/// then name.
std::vector<std::string> rank_by_degree(const NodeSet& members,
                                        const WordGraph& g);
std::vector<std::string> representatives_by_degree(const Topic& topic,
                                                   const WordGraph& g,
                                                   std::size_t top_n = kDefaultTopN);

/// Mean of the member vectors.
std::vector<double> topic_vector(const NodeSet& members,
                                 const EmbeddingTable& emb);

/// Members by cosine to the topic vector, ties by name.
std::vector<std::string> rank_by_tvs(const NodeSet& members,
                                     const EmbeddingTable& emb);
std::vector<std::string> representatives_by_tvs(const Topic& topic,
                                                 const EmbeddingTable& emb,
                                                 std::size_t top_n = kDefaultTopN);

enum class RepresentativeMode { Degree, Tvs };

RepresentativeMode parse_representative_mode(std::string_view name);
std::string_view to_string(RepresentativeMode mode);

/// Fills ranking and representatives. g is only read in Degree mode.
void assign_representatives(Topic& topic, RepresentativeMode mode,
                            const WordGraph* g, const EmbeddingTable& emb,
                            std::size_t top_n = kDefaultTopN);

// ---------------------------------------------------------------------------
// Weighted k-means baseline

enum class Weighting { TF, TFIDF };

Weighting parse_weighting(std::string_view name);
std::string_view to_string(Weighting weighting);

struct KMeansConfig {
  std::size_t k = 8;
  Weighting weighting = Weighting::TF;
  std::uint64_t seed = 1;
  std::size_t max_iter = 300;
  std::size_t restarts = 10;
  bool enforce_min_words = true;
  std::size_t min_words = kMinTopicWords;
  std::size_t top_n = kDefaultTopN;

  void validate() const;
};

/// Row-major point matrix.
struct PointSet {
  std::size_t dim = 0;
  std::vector<double> data;

  std::size_t size() const noexcept { return dim == 0 ? 0 : data.size() / dim; }
  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * dim, dim};
  }
};

struct KMeansRun {
  std::vector<std::size_t> assignment;
  PointSet centroids;
  double wcss = 0.0;
  /// Weighted WCSS after every assignment step and every update step.
  std::vector<double> wcss_history;
  std::size_t iterations = 0;
  std::size_t restart = 0;  // index of the winning restart
};

/// Sample-weighted Lloyd iterations seeded by weighted k-means++. Returns the
/// restart with the lowest WCSS (earliest on ties).
KMeansRun weighted_kmeans(const PointSet& points, std::span<const double> weights,
                          std::size_t k, std::uint64_t seed,
                          std::size_t max_iter, std::size_t restarts);

struct KMeansResult {
  KMeansRun run;
  std::vector<std::string> words;  // row order of the clustered points
  TopicExtraction topics;
};

/// Clusters every embedded vocabulary word, weighted by TF or TF-IDF.
/// Topic representatives use the TVS ranking.
KMeansResult kmeans_weighted(const Vocabulary& vocab, const EmbeddingTable& emb,
                             const KMeansConfig& config);

}  // namespace kcomp
