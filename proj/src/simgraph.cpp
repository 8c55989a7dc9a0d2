#include "kcomp/simgraph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "kcomp/error.hpp"

namespace kcomp {

WordGraph::WordGraph(std::vector<std::string> nodes, std::vector<WeightedEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i - 1] < nodes_[i])) {
      throw usage_error("graph nodes must be sorted and unique");
    }
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.u >= e.v || e.v >= nodes_.size()) {
      throw usage_error("graph edge endpoints must satisfy u < v < node_count");
    }
    if (i > 0) {
      const auto& p = edges_[i - 1];
      if (!(p.u < e.u || (p.u == e.u && p.v < e.v))) {
        throw usage_error("graph edges must be sorted with no repeated pair");
      }
    }
  }
}

WordGraph WordGraph::from_named(std::vector<std::string> nodes,
                                const std::vector<NamedEdge>& edges) {
  for (const auto& [a, b, w] : edges) {
    nodes.push_back(a);
    nodes.push_back(b);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  auto id = [&](const std::string& w) {
    return static_cast<std::uint32_t>(
        std::lower_bound(nodes.begin(), nodes.end(), w) - nodes.begin());
  };
  std::vector<WeightedEdge> out;
  out.reserve(edges.size());
  for (const auto& [a, b, w] : edges) {
    if (a == b) throw usage_error("self-loop on '" + a + "'");
    auto u = id(a), v = id(b);
    if (u > v) std::swap(u, v);
    out.push_back({u, v, w});
  }
  std::sort(out.begin(), out.end(), [](const WeightedEdge& x, const WeightedEdge& y) {
    return x.u != y.u ? x.u < y.u : x.v < y.v;
  });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].u == out[i - 1].u && out[i].v == out[i - 1].v) {
      throw usage_error("repeated edge " + nodes[out[i].u] + "-" + nodes[out[i].v]);
    }
  }
  return WordGraph(std::move(nodes), std::move(out));
}

std::optional<std::uint32_t> WordGraph::index(std::string_view word) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), word,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == nodes_.end() || *it != word) return std::nullopt;
  return static_cast<std::uint32_t>(it - nodes_.begin());
}

std::optional<double> WordGraph::weight(std::string_view a, std::string_view b) const {
  auto ia = index(a), ib = index(b);
  if (!ia || !ib || *ia == *ib) return std::nullopt;
  auto u = std::min(*ia, *ib), v = std::max(*ia, *ib);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{u, v},
                             [](const WeightedEdge& e, const std::pair<std::uint32_t, std::uint32_t>& k) {
                               return e.u != k.first ? e.u < k.first : e.v < k.second;
                             });
  if (it == edges_.end() || it->u != u || it->v != v) return std::nullopt;
  return it->weight;
}

Adjacency WordGraph::adjacency() const {
  Adjacency adj;
  const std::size_t n = nodes_.size();
  adj.offsets.assign(n + 1, 0);
  for (const auto& e : edges_) {
    ++adj.offsets[e.u + 1];
    ++adj.offsets[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) adj.offsets[i + 1] += adj.offsets[i];
  adj.neighbors.resize(2 * edges_.size());
  adj.edge_ids.resize(2 * edges_.size());
  std::vector<std::size_t> fill(adj.offsets.begin(), adj.offsets.end() - 1);
  // Edges are sorted by (u, v): every (w, x) with w < x precedes every
  // (x, y), so one pass leaves each neighbor list sorted.
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    adj.neighbors[fill[e.u]] = e.v;
    adj.edge_ids[fill[e.u]++] = i;
    adj.neighbors[fill[e.v]] = e.u;
    adj.edge_ids[fill[e.v]++] = i;
  }
  return adj;
}

WordGraph WordGraph::induced(std::span<const std::uint32_t> keep) const {
  std::vector<std::uint32_t> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw usage_error("induced subgraph node list has repeats");
  }
  constexpr auto kAbsent = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> remap(nodes_.size(), kAbsent);
  std::vector<std::string> nodes;
  nodes.reserve(sorted.size());
  for (auto old : sorted) {
    if (old >= nodes_.size()) throw usage_error("induced subgraph node out of range");
    remap[old] = static_cast<std::uint32_t>(nodes.size());
    nodes.push_back(nodes_[old]);
  }
  std::vector<WeightedEdge> edges;
  for (const auto& e : edges_) {
    if (remap[e.u] != kAbsent && remap[e.v] != kAbsent) {
      edges.push_back({remap[e.u], remap[e.v], e.weight});
    }
  }
  return WordGraph(std::move(nodes), std::move(edges));
}

WordGraph WordGraph::induced(const std::vector<std::string>& keep) const {
  std::vector<std::uint32_t> ids;
  ids.reserve(keep.size());
  for (const auto& w : keep) {
    auto i = index(w);
    if (!i) throw data_error("word '" + w + "' is not in the graph");
    ids.push_back(*i);
  }
  return induced(ids);
}

CompleteGraph build_complete_graph(const Vocabulary& vocab, const EmbeddingTable& emb,
                                   std::size_t node_cap) {
  CompleteGraph out;
  std::vector<std::string> nodes;
  for (const auto& w : vocab.words()) {
    if (emb.contains(w)) {
      nodes.push_back(w);
    } else {
      ++out.missing_embeddings;
    }
  }
  if (nodes.size() < 2) {
    throw data_error("fewer than 2 vocabulary words have embeddings");
  }
  if (nodes.size() > node_cap) {
    throw data_error("complete graph would have " + std::to_string(nodes.size()) +
                     " nodes, above the node cap of " + std::to_string(node_cap) +
                     "; raise min_count or the cap");
  }
  std::sort(nodes.begin(), nodes.end());

  const std::size_t n = nodes.size();
  const std::size_t dim = emb.dim();
  std::vector<double> vecs(n * dim);
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = emb.vector(nodes[i]);
    std::copy(v.begin(), v.end(), vecs.begin() + static_cast<std::ptrdiff_t>(i * dim));
    double s = 0.0;
    for (double x : v) s += x * x;
    if (s == 0.0) throw data_error("zero embedding for '" + nodes[i] + "'");
    norms[i] = std::sqrt(s);
  }
  std::vector<WeightedEdge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t u = 0; u < n; ++u) {
    const double* a = vecs.data() + u * dim;
    for (std::size_t v = u + 1; v < n; ++v) {
      const double* b = vecs.data() + v * dim;
      double dot = 0.0;
      for (std::size_t d = 0; d < dim; ++d) dot += a[d] * b[d];
      const double c = std::clamp(dot / (norms[u] * norms[v]), -1.0, 1.0);
      edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v), c});
    }
  }
  out.graph = WordGraph(std::move(nodes), std::move(edges));
  return out;
}

double percentile_threshold(std::span<const double> weights, double rank) {
  if (weights.empty()) throw data_error("percentile of an empty edge set");
  if (!(rank >= 0.0 && rank <= 100.0)) throw usage_error("percentile rank must be in [0, 100]");
  std::vector<double> w(weights.begin(), weights.end());
  const double pos = rank / 100.0 * static_cast<double>(w.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  std::nth_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(lo), w.end());
  const double at_lo = w[lo];
  if (lo + 1 >= w.size() || frac == 0.0) return at_lo;
  const double at_hi = *std::min_element(w.begin() + static_cast<std::ptrdiff_t>(lo + 1), w.end());
  return at_lo + frac * (at_hi - at_lo);
}

namespace {

WordGraph keep_edges(const WordGraph& g, const std::vector<bool>& keep) {
  std::vector<WeightedEdge> edges;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (keep[i]) edges.push_back(g.edges()[i]);
  }
  return remove_isolated(WordGraph(g.nodes(), std::move(edges)));
}

}  // namespace

WordGraph prune_percentile(const WordGraph& g, double rank) {
  if (g.edge_count() == 0) throw data_error("cannot prune a graph without edges");
  std::vector<double> weights;
  weights.reserve(g.edge_count());
  for (const auto& e : g.edges()) weights.push_back(e.weight);
  const double t = percentile_threshold(weights, rank);
  std::vector<bool> keep(g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) keep[i] = g.edges()[i].weight >= t;
  return keep_edges(g, keep);
}

WordGraph prune_top_m(const WordGraph& g, std::size_t m) {
  if (m < 1) throw usage_error("top_m requires m >= 1");
  if (g.edge_count() == 0) throw data_error("cannot prune a graph without edges");
  const Adjacency adj = g.adjacency();
  std::vector<bool> keep(g.edge_count(), false);
  std::vector<std::size_t> slots;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    slots.clear();
    for (auto k = adj.offsets[v]; k < adj.offsets[v + 1]; ++k) slots.push_back(k);
    const std::size_t take = std::min(m, slots.size());
    std::partial_sort(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(take), slots.end(),
                      [&](std::size_t a, std::size_t b) {
                        const double wa = g.edges()[adj.edge_ids[a]].weight;
                        const double wb = g.edges()[adj.edge_ids[b]].weight;
                        if (wa != wb) return wa > wb;
                        return adj.neighbors[a] < adj.neighbors[b];
                      });
    for (std::size_t i = 0; i < take; ++i) keep[adj.edge_ids[slots[i]]] = true;
  }
  return keep_edges(g, keep);
}

WordGraph remove_isolated(const WordGraph& g) {
  std::vector<bool> used(g.node_count(), false);
  for (const auto& e : g.edges()) used[e.u] = used[e.v] = true;
  std::vector<std::uint32_t> keep;
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    if (used[i]) keep.push_back(i);
  }
  if (keep.size() == g.node_count()) return g;
  return g.induced(keep);
}

void write_edge_list(std::ostream& out, const WordGraph& g) {
  char buf[64];
  for (const auto& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "%.9f", e.weight);
    out << g.node(e.u) << '\t' << g.node(e.v) << '\t' << buf << '\n';
  }
}

}  // namespace kcomp
