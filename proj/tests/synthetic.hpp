#pragma once

// Generators shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <unistd.h>

#include "kcomp/pipeline.hpp"
#include "oracles.hpp"

namespace synth {

inline std::string vertex_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "v%02d", i);
  return buf;
}

inline bool connected(const oracle::SmallGraph& g) {
  if (g.n == 0) return true;
  const auto adj = g.neighbor_masks();
  std::uint32_t seen = 1, frontier = 1;
  while (frontier) {
    std::uint32_t next = 0;
    for (std::uint32_t f = frontier; f; f &= f - 1) next |= adj[std::countr_zero(f)];
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == (1u << g.n) - 1;
}

inline oracle::SmallGraph random_graph(std::mt19937_64& rng, int n, double p) {
  std::bernoulli_distribution edge(p);
  oracle::SmallGraph g;
  g.n = n;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (edge(rng)) g.edges.emplace_back(u, v);
    }
  }
  return g;
}

inline oracle::SmallGraph random_connected_graph(std::mt19937_64& rng, int n, double p) {
  while (true) {
    auto g = random_graph(rng, n, p);
    if (connected(g)) return g;
  }
}

// All vertices become nodes, including isolated ones.
inline kcomp::WordGraph to_word_graph(const oracle::SmallGraph& g) {
  std::vector<std::string> nodes;
  for (int i = 0; i < g.n; ++i) nodes.push_back(vertex_name(i));
  std::vector<kcomp::WeightedEdge> edges;
  for (auto [u, v] : g.edges) edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v), 1.0});
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  return kcomp::WordGraph(std::move(nodes), std::move(edges));
}

inline kcomp::NodeSet mask_names(std::uint32_t mask) {
  kcomp::NodeSet out;
  for (std::uint32_t m = mask; m; m &= m - 1) out.push_back(vertex_name(std::countr_zero(m)));
  return out;
}

inline std::vector<kcomp::NodeSet> masks_to_sets(const std::vector<std::uint32_t>& masks) {
  std::vector<kcomp::NodeSet> out;
  for (auto m : masks) out.push_back(mask_names(m));
  std::sort(out.begin(), out.end());
  return out;
}

// Complete graph with random weights in [-1, 1].
inline kcomp::WordGraph random_weighted_graph(std::mt19937_64& rng, int n, double density) {
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::vector<std::string> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back(vertex_name(i));
  std::vector<kcomp::WeightedEdge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (keep(rng)) edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v), w(rng)});
    }
  }
  if (edges.empty()) edges.push_back({0, 1, w(rng)});
  return kcomp::WordGraph(std::move(nodes), std::move(edges));
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("kcomp-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Three word communities. Each community's vectors sit around its own axis
// with small noise, so cosine within a community is near 1 and across
// communities near 0. Segments draw words from a single community.
struct PlantedCorpus {
  std::vector<std::vector<std::string>> communities;
  std::filesystem::path corpus;
  std::filesystem::path embeddings;
};

inline std::string community_word(int c, int i) {
  static const char* stems[] = {"engine", "seat", "price"};
  return std::string(stems[c]) + static_cast<char>('a' + i);
}

inline PlantedCorpus write_planted(const std::filesystem::path& dir, std::uint64_t seed,
                                   int words_per_community = 8, int segments = 90) {
  PlantedCorpus out;
  std::mt19937_64 rng(seed);
  const int communities = 3;
  const int dim = 12;
  for (int c = 0; c < communities; ++c) {
    out.communities.emplace_back();
    for (int i = 0; i < words_per_community; ++i) out.communities[c].push_back(community_word(c, i));
  }

  std::normal_distribution<double> noise(0.0, 0.02);
  std::ostringstream emb;
  emb << communities * words_per_community << ' ' << dim << '\n';
  for (int c = 0; c < communities; ++c) {
    for (int i = 0; i < words_per_community; ++i) {
      emb << out.communities[c][i];
      for (int d = 0; d < dim; ++d) {
        const double base = (d % communities == c) ? 1.0 : 0.0;
        char buf[32];
        std::snprintf(buf, sizeof buf, " %.6f", base + noise(rng));
        emb << buf;
      }
      emb << '\n';
    }
  }

  std::uniform_int_distribution<int> pick(0, words_per_community - 1);
  std::ostringstream text;
  for (int s = 0; s < segments; ++s) {
    const int c = s % communities;
    for (int t = 0; t < 12; ++t) text << (t ? " " : "") << out.communities[c][pick(rng)];
    text << '\n';
  }
  out.corpus = dir / "planted.txt";
  out.embeddings = dir / "planted.vec";
  write_text(out.corpus, text.str());
  write_text(out.embeddings, emb.str());
  return out;
}

inline kcomp::PipelineConfig planted_config(const PlantedCorpus& p) {
  kcomp::PipelineConfig c;
  c.corpus = p.corpus;
  c.embedding_source = kcomp::EmbeddingSource::Load;
  c.embeddings = p.embeddings;
  c.prune = kcomp::PruneStrategy::Percentile;
  c.percentile = 80.0;
  c.k_max = 1;
  c.min_count = 2;
  c.min_topics_valid = 3;
  c.seed = 11;
  return c;
}

}  // namespace synth
