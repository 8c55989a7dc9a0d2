#pragma once

// Brute-force reference implementations. Exponential on purpose; only for
// the small instances the tests generate.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

struct SmallGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  std::vector<std::uint32_t> neighbor_masks() const {
    std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
    for (auto [u, v] : edges) {
      adj[u] |= 1u << v;
      adj[v] |= 1u << u;
    }
    return adj;
  }
};

// Edges between t and s \ t, t a subset of s.
inline int crossing(const std::vector<std::uint32_t>& adj, std::uint32_t s, std::uint32_t t) {
  int c = 0;
  for (std::uint32_t rest = t; rest; rest &= rest - 1) {
    const int v = std::countr_zero(rest);
    c += std::popcount(adj[v] & s & ~t);
  }
  return c;
}

// Edge connectivity of the subgraph induced by s (|s| >= 2).
inline int connectivity(const std::vector<std::uint32_t>& adj, std::uint32_t s) {
  const std::uint32_t low = s & (~s + 1);
  const std::uint32_t others = s & ~low;
  int best = std::numeric_limits<int>::max();
  // Every proper side containing the lowest vertex.
  for (std::uint32_t sub = others;; sub = (sub - 1) & others) {
    const std::uint32_t side = low | sub;
    if (side != s) best = std::min(best, crossing(adj, s, side));
    if (sub == 0) break;
  }
  return best;
}

inline int min_cut(const SmallGraph& g) {
  return connectivity(g.neighbor_masks(), (1u << g.n) - 1);
}

// Maximal vertex sets of size >= 2 whose induced subgraph is k-edge-connected.
inline std::vector<std::uint32_t> k_edge_sets(const SmallGraph& g, int k) {
  const auto adj = g.neighbor_masks();
  const std::uint32_t full = (1u << g.n) - 1;
  std::vector<std::uint32_t> good;
  for (std::uint32_t s = 1; s <= full; ++s) {
    if (std::popcount(s) >= 2 && connectivity(adj, s) >= k) good.push_back(s);
  }
  std::vector<std::uint32_t> maximal;
  for (auto s : good) {
    bool dominated = false;
    for (auto t : good) {
      if (t != s && (s & t) == s) {
        dominated = true;
        break;
      }
    }
    if (!dominated) maximal.push_back(s);
  }
  return maximal;
}

// Same, but computes connectivity of every subset once and answers all k.
struct KEdgeTable {
  std::vector<int> lambda;  // -1 for |s| < 2
  explicit KEdgeTable(const SmallGraph& g) {
    const auto adj = g.neighbor_masks();
    const std::uint32_t full = (1u << g.n) - 1;
    lambda.assign(full + 1, -1);
    for (std::uint32_t s = 1; s <= full; ++s) {
      if (std::popcount(s) >= 2) lambda[s] = connectivity(adj, s);
    }
  }
  std::vector<std::uint32_t> maximal(int k) const {
    std::vector<std::uint32_t> good, out;
    for (std::uint32_t s = 1; s < lambda.size(); ++s) {
      if (lambda[s] >= k) good.push_back(s);
    }
    for (auto s : good) {
      bool dominated = std::any_of(good.begin(), good.end(),
                                   [&](std::uint32_t t) { return t != s && (s & t) == s; });
      if (!dominated) out.push_back(s);
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Co-occurrence oracles over explicit token lists.

using Tokens = std::vector<std::string>;

inline std::vector<std::set<std::string>> units(const std::vector<Tokens>& segments,
                                                std::size_t window /* 0 = document */) {
  std::vector<std::set<std::string>> out;
  for (const auto& seg : segments) {
    if (window == 0 || seg.size() <= window) {
      out.emplace_back(seg.begin(), seg.end());
      continue;
    }
    for (std::size_t i = 0; i + window <= seg.size(); ++i) {
      out.emplace_back(seg.begin() + static_cast<std::ptrdiff_t>(i),
                       seg.begin() + static_cast<std::ptrdiff_t>(i + window));
    }
  }
  return out;
}

inline double count_units(const std::vector<std::set<std::string>>& u, const std::string& a) {
  double c = 0;
  for (const auto& s : u) c += s.count(a) ? 1 : 0;
  return c;
}

inline double count_units(const std::vector<std::set<std::string>>& u, const std::string& a,
                          const std::string& b) {
  double c = 0;
  for (const auto& s : u) c += (s.count(a) && s.count(b)) ? 1 : 0;
  return c;
}

inline double umass(const std::vector<Tokens>& segments, const Tokens& words) {
  const auto u = units(segments, 0);
  double sum = 0;
  int pairs = 0;
  for (std::size_t i = 1; i < words.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double dj = count_units(u, words[j]);
      if (dj == 0) continue;
      sum += std::log((count_units(u, words[i], words[j]) + 1.0) / dj);
      ++pairs;
    }
  }
  return pairs ? sum / pairs : std::nan("");
}

inline double npmi(const std::vector<std::set<std::string>>& u, const std::string& a,
                   const std::string& b) {
  const double n = static_cast<double>(u.size());
  const double joint = count_units(u, a, b);
  if (joint == 0) return -1.0;
  if (joint == n) return 1.0;
  const double eps = 1e-12;
  const double pab = joint / n;
  const double pa = count_units(u, a) / n, pb = count_units(u, b) / n;
  return std::log((pab + eps) / (pa * pb)) / -std::log(pab + eps);
}

// Full NPMI matrix over the words present in the units, then one-set cosine
// confirmation against the summed context vector.
inline double cv(const std::vector<Tokens>& segments, const Tokens& words, std::size_t window) {
  const auto u = units(segments, window);
  Tokens present;
  for (const auto& w : words) {
    if (count_units(u, w) > 0 && std::find(present.begin(), present.end(), w) == present.end()) {
      present.push_back(w);
    }
  }
  const std::size_t n = present.size();
  if (n < 2) return std::nan("");
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = npmi(u, present[i], present[j]);
  }
  std::vector<double> sum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) sum[j] += m[i][j];
  }
  auto cosine = [](const std::vector<double>& x, const std::vector<double>& y) {
    double d = 0, nx = 0, ny = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      d += x[i] * y[i];
      nx += x[i] * x[i];
      ny += y[i] * y[i];
    }
    return (nx == 0 || ny == 0) ? 0.0 : d / std::sqrt(nx * ny);
  };
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) total += cosine(m[i], sum);
  return std::clamp(total / static_cast<double>(n), 0.0, 1.0);
}

}  // namespace oracle
