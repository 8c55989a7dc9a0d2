#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kcomp/simgraph.hpp"

namespace kcomp {

/// Sorted list of node names.
using NodeSet = std::vector<std::string>;

struct Cut {
  std::uint64_t value = 0;
  NodeSet side_a;  // holds the lexicographically smallest node
  NodeSet side_b;
};

struct ComponentSplit {
  std::vector<NodeSet> components;  // >= 2 nodes each
  NodeSet singletons;
};

/// Connectivity here is structural: every edge counts 1 regardless of its
/// cosine weight.
ComponentSplit connected_components(const WordGraph& g);

/// Stoer-Wagner minimum cut on the unit-weight graph. Requires a connected
/// graph with at least 2 nodes. Maximum-adjacency ties go to the smaller
/// node index, so the cut returned is deterministic.
Cut global_min_cut(const WordGraph& g);

/// 0 for a disconnected graph. Requires at least 2 nodes.
std::uint64_t edge_connectivity(const WordGraph& g);

/// Maximal node sets whose induced subgraph is k-edge-connected (>= 2
/// nodes). The sets are unique, pairwise disjoint and returned in
/// lexicographic order.
std::vector<NodeSet> k_edge_subgraphs(const WordGraph& g, std::size_t k);

struct KComponent {
  std::size_t level = 0;
  NodeSet members;
  std::optional<std::size_t> parent;  // index into the level-1 list below
};

class ComponentHierarchy {
 public:
  ComponentHierarchy() = default;
  explicit ComponentHierarchy(std::vector<std::vector<KComponent>> levels)
      : levels_(std::move(levels)) {}

  std::size_t k_max() const noexcept { return levels_.size(); }
  /// 1-based; returns an empty list beyond k_max.
  const std::vector<KComponent>& level(std::size_t k) const;
  bool empty() const noexcept;

  /// {"levels": {"1": [["w1","w2"], ...], ...}}
  std::string to_json() const;

 private:
  std::vector<std::vector<KComponent>> levels_;
};

/// Levels 1..k_max, each level computed inside the components of the level
/// below.
ComponentHierarchy build_hierarchy(const WordGraph& g, std::size_t k_max);

}  // namespace kcomp
