#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "kcomp/corpus.hpp"
#include "kcomp/embeddings.hpp"

namespace kcomp {

struct WeightedEdge {
  std::uint32_t u = 0;  // u < v, indices into WordGraph::nodes()
  std::uint32_t v = 0;
  double weight = 0.0;
};

/// Compressed adjacency: neighbors of node i are
/// neighbors[offsets[i] .. offsets[i+1]), each paired with an edge index.
struct Adjacency {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> neighbors;
  std::vector<std::size_t> edge_ids;

  std::size_t degree(std::size_t node) const {
    return offsets[node + 1] - offsets[node];
  }
};

/// Undirected weighted word graph. Nodes are kept sorted lexicographically
/// and each unordered pair is stored once, so weight(a,b) == weight(b,a).
class WordGraph {
 public:
  using NamedEdge = std::tuple<std::string, std::string, double>;

  WordGraph() = default;
  /// nodes must be strictly increasing; edges must have u < v and be sorted
  /// by (u, v) with no repeats.
  WordGraph(std::vector<std::string> nodes, std::vector<WeightedEdge> edges);

  /// Convenience constructor; nodes may be in any order and endpoints of
  /// named edges are added implicitly. Duplicate pairs and self-loops throw.
  static WordGraph from_named(std::vector<std::string> nodes,
                              const std::vector<NamedEdge>& edges);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }
  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }
  const std::string& node(std::size_t i) const { return nodes_.at(i); }
  std::optional<std::uint32_t> index(std::string_view word) const;
  std::optional<double> weight(std::string_view a, std::string_view b) const;

  Adjacency adjacency() const;

  /// Induced subgraph on the given node indices (any order, no repeats).
  WordGraph induced(std::span<const std::uint32_t> keep) const;
  /// Induced subgraph by name; unknown names throw.
  WordGraph induced(const std::vector<std::string>& keep) const;

 private:
  std::vector<std::string> nodes_;
  std::vector<WeightedEdge> edges_;
};

struct CompleteGraph {
  WordGraph graph;
  std::size_t missing_embeddings = 0;  // vocabulary words without a vector
};

constexpr std::size_t kDefaultNodeCap = 20000;

/// All pairs of embedded vocabulary words, weighted by cosine similarity.
/// Throws a data error below 2 embedded words or above node_cap.
CompleteGraph build_complete_graph(const Vocabulary& vocab,
                                   const EmbeddingTable& emb,
                                   std::size_t node_cap = kDefaultNodeCap);

/// Linear interpolation between closest ranks of the sorted weights:
/// position rank/100 * (n-1).
double percentile_threshold(std::span<const double> weights, double rank);

/// Drops edges with weight below the percentile threshold, then isolated
/// nodes.
WordGraph prune_percentile(const WordGraph& g, double rank);

/// Keeps an edge if it is among the m heaviest edges of either endpoint.
/// Ties at rank m go to the lexicographically smaller neighbor.
WordGraph prune_top_m(const WordGraph& g, std::size_t m);

WordGraph remove_isolated(const WordGraph& g);

/// "word1\tword2\tweight" lines, weight with 9 decimals, sorted.
void write_edge_list(std::ostream& out, const WordGraph& g);

}  // namespace kcomp
