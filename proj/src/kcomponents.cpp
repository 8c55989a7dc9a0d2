#include "kcomp/kcomponents.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>

#include <json.hpp>

#include "kcomp/error.hpp"

namespace kcomp {

namespace {

using NodeList = std::vector<std::uint32_t>;

// Unit-weight neighbor lists over WordGraph node indices.
std::vector<NodeList> neighbor_lists(const WordGraph& g) {
  std::vector<NodeList> adj(g.node_count());
  for (const auto& e : g.edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  return adj;
}

NodeSet names_of(const WordGraph& g, NodeList nodes) {
  std::sort(nodes.begin(), nodes.end());
  NodeSet out;
  out.reserve(nodes.size());
  for (auto v : nodes) out.push_back(g.node(v));
  return out;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // The smaller id stays the representative.
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

// Max-key heap entry; equal keys pop the smaller vertex first.
struct HeapEntry {
  std::int64_t key;
  std::uint32_t vertex;
  bool operator<(const HeapEntry& o) const {
    return key != o.key ? key < o.key : vertex > o.vertex;
  }
};

// Weighted graph of supernodes; members index the node list it was built from.
struct ContractedGraph {
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> adj;
  std::vector<NodeList> members;

  std::size_t size() const { return adj.size(); }
};

// Local unit-weight graph on `nodes`, using only edges between them.
ContractedGraph local_graph(const std::vector<NodeList>& adj, const NodeList& nodes,
                            std::vector<std::uint32_t>& local_id) {
  constexpr auto kAbsent = static_cast<std::uint32_t>(-1);
  ContractedGraph g;
  g.adj.resize(nodes.size());
  g.members.resize(nodes.size());
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    local_id[nodes[i]] = i;
    g.members[i] = {i};
  }
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    for (auto x : adj[nodes[i]]) {
      const auto j = local_id[x];
      if (j != kAbsent) g.adj[i].emplace_back(j, 1);
    }
  }
  for (auto v : nodes) local_id[v] = kAbsent;
  return g;
}

// Merges every DSU class into one supernode, summing parallel edge weights.
ContractedGraph contract(const ContractedGraph& g, DisjointSets& dsu) {
  std::vector<std::uint32_t> new_id(g.size(), static_cast<std::uint32_t>(-1));
  std::uint32_t next = 0;
  for (std::uint32_t v = 0; v < g.size(); ++v) {
    const auto r = dsu.find(v);
    if (new_id[r] == static_cast<std::uint32_t>(-1)) new_id[r] = next++;
    new_id[v] = new_id[r];
  }
  ContractedGraph out;
  out.adj.resize(next);
  out.members.resize(next);
  for (std::uint32_t v = 0; v < g.size(); ++v) {
    auto& m = out.members[new_id[v]];
    m.insert(m.end(), g.members[v].begin(), g.members[v].end());
  }
  std::vector<std::int64_t> acc(next, 0);
  std::vector<std::uint32_t> touched;
  std::vector<std::vector<std::uint32_t>> groups(next);
  for (std::uint32_t v = 0; v < g.size(); ++v) groups[new_id[v]].push_back(v);
  for (std::uint32_t s = 0; s < next; ++s) {
    touched.clear();
    for (auto v : groups[s]) {
      for (auto [x, w] : g.adj[v]) {
        const auto t = new_id[x];
        if (t == s) continue;
        if (acc[t] == 0) touched.push_back(t);
        acc[t] += w;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto t : touched) {
      out.adj[s].emplace_back(t, acc[t]);
      acc[t] = 0;
    }
  }
  return out;
}

// Finds a cut of value < k in a connected graph, or reports that none
// exists. Each round runs one maximum-adjacency ordering; an edge (x, y)
// that lifts y's attachment to >= k proves lambda(x, y) >= k, so x and y are
// merged. Merging such pairs never destroys a cut below k, and every round
// merges at least one pair.
std::optional<NodeList> find_cut_below(ContractedGraph g, std::int64_t k) {
  while (g.size() > 1) {
    for (std::uint32_t v = 0; v < g.size(); ++v) {
      std::int64_t deg = 0;
      for (auto [x, w] : g.adj[v]) deg += w;
      if (deg < k) return g.members[v];
    }
    const std::size_t n = g.size();
    std::vector<std::int64_t> key(n, 0);
    std::vector<bool> in_order(n, false);
    DisjointSets dsu(n);
    std::priority_queue<HeapEntry> heap;
    heap.push({0, 0});
    std::uint32_t last = 0;
    while (!heap.empty()) {
      const auto [kv, v] = heap.top();
      heap.pop();
      if (in_order[v] || kv != key[v]) continue;
      in_order[v] = true;
      last = v;
      for (auto [y, w] : g.adj[v]) {
        if (in_order[y]) continue;
        key[y] += w;
        if (key[y] >= k) dsu.unite(v, y);
        heap.push({key[y], y});
      }
    }
    if (key[last] < k) return g.members[last];
    g = contract(g, dsu);
  }
  return std::nullopt;
}

// Maximal k-edge-connected node sets inside `start`. Nodes whose degree
// inside the current piece drops below k are peeled first; their degree
// cut is already below k.
std::vector<NodeList> decompose(const std::vector<NodeList>& adj, NodeList start,
                                std::size_t k) {
  const std::size_t n = adj.size();
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t current = 0;
  std::vector<std::uint32_t> degree(n, 0);
  std::vector<std::uint32_t> local_id(n, static_cast<std::uint32_t>(-1));
  std::vector<NodeList> result;
  std::vector<NodeList> stack;
  stack.push_back(std::move(start));

  while (!stack.empty()) {
    NodeList piece = std::move(stack.back());
    stack.pop_back();
    if (piece.size() < 2) continue;
    ++current;
    for (auto v : piece) stamp[v] = current;

    NodeList peel;
    for (auto v : piece) {
      std::uint32_t d = 0;
      for (auto x : adj[v]) d += stamp[x] == current;
      degree[v] = d;
      if (d < k) peel.push_back(v);
    }
    while (!peel.empty()) {
      const auto v = peel.back();
      peel.pop_back();
      if (stamp[v] != current) continue;
      stamp[v] = 0;
      for (auto x : adj[v]) {
        if (stamp[x] == current && degree[x]-- == k) peel.push_back(x);
      }
    }

    // Connected components of what is left.
    const std::uint32_t seen = ++current;
    for (auto root : piece) {
      if (stamp[root] != seen - 1) continue;
      NodeList comp{root};
      stamp[root] = seen;
      for (std::size_t i = 0; i < comp.size(); ++i) {
        for (auto x : adj[comp[i]]) {
          if (stamp[x] == seen - 1) {
            stamp[x] = seen;
            comp.push_back(x);
          }
        }
      }
      if (comp.size() < 2) continue;
      std::sort(comp.begin(), comp.end());
      if (k == 1) {
        result.push_back(std::move(comp));
        continue;
      }
      auto cut = find_cut_below(local_graph(adj, comp, local_id),
                                static_cast<std::int64_t>(k));
      if (!cut) {
        result.push_back(std::move(comp));
        continue;
      }
      NodeList side_a, side_b;
      std::vector<bool> on_cut_side(comp.size(), false);
      for (auto local : *cut) on_cut_side[local] = true;
      for (std::size_t i = 0; i < comp.size(); ++i) {
        (on_cut_side[i] ? side_b : side_a).push_back(comp[i]);
      }
      stack.push_back(std::move(side_a));
      stack.push_back(std::move(side_b));
    }
    // Leave no stale marks from this piece.
    for (auto v : piece) stamp[v] = 0;
  }
  for (auto& r : result) std::sort(r.begin(), r.end());
  std::sort(result.begin(), result.end());
  return result;
}

bool is_connected(const std::vector<NodeList>& adj) {
  if (adj.empty()) return true;
  std::vector<bool> seen(adj.size(), false);
  NodeList queue{0};
  seen[0] = true;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (auto x : adj[queue[i]]) {
      if (!seen[x]) {
        seen[x] = true;
        queue.push_back(x);
      }
    }
  }
  return queue.size() == adj.size();
}

struct MinCut {
  std::int64_t value;
  NodeList side;  // one side, original indices
};

// Stoer-Wagner on unit weights. The merged vertex keeps the smaller id and
// every phase starts from the smallest active id.
MinCut stoer_wagner(const std::vector<NodeList>& adj) {
  const auto n = static_cast<std::uint32_t>(adj.size());
  std::vector<std::map<std::uint32_t, std::int64_t>> w(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    for (auto x : adj[v]) w[v][x] += 1;
  }
  std::vector<NodeList> members(n);
  for (std::uint32_t v = 0; v < n; ++v) members[v] = {v};
  std::vector<bool> active(n, true);
  std::uint32_t remaining = n;

  MinCut best{std::numeric_limits<std::int64_t>::max(), {}};
  std::vector<std::int64_t> key(n);
  std::vector<bool> in_order(n);
  while (remaining > 1) {
    std::fill(key.begin(), key.end(), 0);
    std::fill(in_order.begin(), in_order.end(), false);
    const auto start = static_cast<std::uint32_t>(
        std::find(active.begin(), active.end(), true) - active.begin());
    std::priority_queue<HeapEntry> heap;
    heap.push({0, start});
    std::uint32_t prev = start, last = start;
    std::uint32_t added = 0;
    while (!heap.empty() && added < remaining) {
      const auto [kv, v] = heap.top();
      heap.pop();
      if (in_order[v] || kv != key[v]) continue;
      in_order[v] = true;
      ++added;
      prev = last;
      last = v;
      for (auto [y, wy] : w[v]) {
        if (in_order[y]) continue;
        key[y] += wy;
        heap.push({key[y], y});
      }
    }
    if (added < remaining) throw data_error("minimum cut requires a connected graph");
    if (key[last] < best.value) {
      best.value = key[last];
      best.side = members[last];
    }
    // Merge last and prev into the smaller id.
    auto keep = std::min(prev, last), gone = std::max(prev, last);
    for (auto [x, wx] : w[gone]) {
      if (x == keep) continue;
      w[keep][x] += wx;
      w[x][keep] += wx;
      w[x].erase(gone);
    }
    w[keep].erase(gone);
    w[gone].clear();
    members[keep].insert(members[keep].end(), members[gone].begin(), members[gone].end());
    members[gone].clear();
    active[gone] = false;
    --remaining;
  }
  return best;
}

}  // namespace

ComponentSplit connected_components(const WordGraph& g) {
  const auto adj = neighbor_lists(g);
  ComponentSplit out;
  std::vector<bool> seen(adj.size(), false);
  for (std::uint32_t root = 0; root < adj.size(); ++root) {
    if (seen[root]) continue;
    NodeList comp{root};
    seen[root] = true;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      for (auto x : adj[comp[i]]) {
        if (!seen[x]) {
          seen[x] = true;
          comp.push_back(x);
        }
      }
    }
    if (comp.size() == 1) {
      out.singletons.push_back(g.node(root));
    } else {
      out.components.push_back(names_of(g, std::move(comp)));
    }
  }
  std::sort(out.components.begin(), out.components.end());
  return out;
}

Cut global_min_cut(const WordGraph& g) {
  if (g.node_count() < 2) throw data_error("minimum cut requires at least 2 nodes");
  const auto adj = neighbor_lists(g);
  if (!is_connected(adj)) throw data_error("minimum cut requires a connected graph");
  MinCut mc = stoer_wagner(adj);
  std::vector<bool> on_side(g.node_count(), false);
  for (auto v : mc.side) on_side[v] = true;
  NodeList a, b;
  for (std::uint32_t v = 0; v < g.node_count(); ++v) (on_side[v] ? b : a).push_back(v);
  if (on_side[0]) std::swap(a, b);
  return {static_cast<std::uint64_t>(mc.value), names_of(g, std::move(a)),
          names_of(g, std::move(b))};
}

std::uint64_t edge_connectivity(const WordGraph& g) {
  if (g.node_count() < 2) throw usage_error("edge connectivity requires at least 2 nodes");
  const auto adj = neighbor_lists(g);
  if (!is_connected(adj)) return 0;
  return static_cast<std::uint64_t>(stoer_wagner(adj).value);
}

std::vector<NodeSet> k_edge_subgraphs(const WordGraph& g, std::size_t k) {
  if (k < 1) throw usage_error("K must be >= 1");
  const auto adj = neighbor_lists(g);
  NodeList all(g.node_count());
  std::iota(all.begin(), all.end(), 0u);
  std::vector<NodeSet> out;
  for (auto& set : decompose(adj, std::move(all), k)) out.push_back(names_of(g, std::move(set)));
  return out;
}

const std::vector<KComponent>& ComponentHierarchy::level(std::size_t k) const {
  static const std::vector<KComponent> kEmpty;
  if (k < 1 || k > levels_.size()) return kEmpty;
  return levels_[k - 1];
}

bool ComponentHierarchy::empty() const noexcept {
  return std::all_of(levels_.begin(), levels_.end(),
                     [](const auto& level) { return level.empty(); });
}

std::string ComponentHierarchy::to_json() const {
  nlohmann::ordered_json levels = nlohmann::ordered_json::object();
  for (std::size_t k = 1; k <= levels_.size(); ++k) {
    auto list = nlohmann::ordered_json::array();
    for (const auto& c : levels_[k - 1]) list.push_back(c.members);
    levels[std::to_string(k)] = std::move(list);
  }
  nlohmann::ordered_json doc;
  doc["levels"] = std::move(levels);
  return doc.dump(2) + "\n";
}

ComponentHierarchy build_hierarchy(const WordGraph& g, std::size_t k_max) {
  if (k_max < 1) throw usage_error("K_max must be >= 1");
  const auto adj = neighbor_lists(g);
  std::vector<std::vector<KComponent>> levels(k_max);
  std::vector<NodeList> below;  // node ids of the previous level, same order

  NodeList all(g.node_count());
  std::iota(all.begin(), all.end(), 0u);
  for (auto& set : decompose(adj, std::move(all), 1)) {
    levels[0].push_back({1, names_of(g, set), std::nullopt});
    below.push_back(std::move(set));
  }
  for (std::size_t k = 2; k <= k_max; ++k) {
    std::vector<std::pair<NodeList, std::size_t>> found;
    for (std::size_t p = 0; p < below.size(); ++p) {
      for (auto& set : decompose(adj, below[p], k)) found.emplace_back(std::move(set), p);
    }
    std::sort(found.begin(), found.end());
    below.clear();
    for (auto& [set, parent] : found) {
      levels[k - 1].push_back({k, names_of(g, set), parent});
      below.push_back(std::move(set));
    }
  }
  return ComponentHierarchy(std::move(levels));
}

}  // namespace kcomp
