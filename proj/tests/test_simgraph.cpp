#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "kcomp/error.hpp"
#include "kcomp/simgraph.hpp"
#include "synthetic.hpp"

using namespace kcomp;

namespace {

using EdgeKey = std::pair<std::string, std::string>;

std::map<EdgeKey, double> edge_map(const WordGraph& g) {
  std::map<EdgeKey, double> out;
  for (const auto& e : g.edges()) out[{g.node(e.u), g.node(e.v)}] = e.weight;
  return out;
}

Vocabulary vocab_of(const std::vector<std::string>& words) {
  std::vector<Term> terms;
  for (const auto& w : words) terms.push_back({w, 1, 1});
  return Vocabulary(terms, 1);
}

// Per-node selection by (weight desc, neighbor name asc), union over nodes.
std::set<EdgeKey> top_m_oracle(const WordGraph& g, std::size_t m) {
  std::map<std::string, std::vector<std::pair<double, std::string>>> incident;
  for (const auto& e : g.edges()) {
    incident[g.node(e.u)].push_back({e.weight, g.node(e.v)});
    incident[g.node(e.v)].push_back({e.weight, g.node(e.u)});
  }
  std::set<EdgeKey> keep;
  for (auto& [node, list] : incident) {
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (std::size_t i = 0; i < std::min(m, list.size()); ++i) {
      keep.insert(std::minmax(node, list[i].second));
    }
  }
  return keep;
}

}  // namespace

TEST_CASE("complete graph from embeddings") {
  EmbeddingTable t(2);
  const double a[] = {1, 0}, b[] = {0, 1}, c[] = {1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};
  t.add("a", a);
  t.add("b", b);
  t.add("c", c);
  auto g = build_complete_graph(vocab_of({"a", "b", "c", "d"}), t);
  CHECK(g.missing_embeddings == 1);
  CHECK(g.graph.node_count() == 3);
  CHECK(g.graph.edge_count() == 3);
  CHECK(*g.graph.weight("a", "c") == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-12));
  CHECK(*g.graph.weight("c", "b") == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-12));
  CHECK(std::abs(*g.graph.weight("a", "b")) < 1e-15);
  CHECK(*g.graph.weight("a", "b") == *g.graph.weight("b", "a"));

  EmbeddingTable four(3);
  for (int i = 0; i < 4; ++i) {
    const double v[] = {1.0 + i, 2.0 - i, 0.5};
    four.add("w" + std::to_string(i), v);
  }
  CHECK(build_complete_graph(vocab_of({"w0", "w1", "w2", "w3"}), four).graph.edge_count() == 6);
  CHECK_THROWS_AS(build_complete_graph(vocab_of({"a"}), t), Error);
  CHECK_THROWS_AS(build_complete_graph(vocab_of({"a", "b", "c"}), t, 2), Error);
}

TEST_CASE("word graph validation") {
  CHECK_THROWS_AS(WordGraph::from_named({}, {{"a", "a", 1.0}}), Error);
  CHECK_THROWS_AS(WordGraph::from_named({}, {{"a", "b", 1.0}, {"b", "a", 0.5}}), Error);
  auto g = WordGraph::from_named({"z"}, {{"b", "a", 0.5}});
  CHECK(g.nodes() == std::vector<std::string>{"a", "b", "z"});
  CHECK(g.edge_count() == 1);
  auto adj = g.adjacency();
  CHECK(adj.degree(0) == 1);
  CHECK(adj.degree(2) == 0);
}

TEST_CASE("percentile threshold interpolates") {
  const double w[] = {0.5, 0.1, 0.4, 0.2, 0.3};
  CHECK(percentile_threshold(w, 80) == doctest::Approx(0.42).epsilon(1e-12));
  CHECK(percentile_threshold(w, 0) == 0.1);
  CHECK(percentile_threshold(w, 100) == 0.5);
  CHECK_THROWS_AS(percentile_threshold(std::span<const double>(), 50), Error);
  CHECK_THROWS_AS(percentile_threshold(w, 101), Error);
}

TEST_CASE("percentile pruning examples") {
  auto g = WordGraph::from_named({}, {{"a", "b", 0.1}, {"b", "c", 0.2}, {"c", "d", 0.3},
                                      {"d", "e", 0.4}, {"e", "f", 0.5}});
  auto p = prune_percentile(g, 80);
  CHECK(p.edge_count() == 1);
  CHECK(p.nodes() == std::vector<std::string>{"e", "f"});
  CHECK(prune_percentile(g, 0).edge_count() == 5);
  CHECK(prune_percentile(g, 0).node_count() == 6);

  auto tie = WordGraph::from_named({}, {{"a", "b", 0.9}, {"c", "d", 0.9}, {"a", "c", 0.1}});
  CHECK(prune_percentile(tie, 100).edge_count() == 2);
  CHECK_THROWS_AS(prune_percentile(WordGraph::from_named({"a", "b"}, {}), 50), Error);
}

TEST_CASE("top_m pruning") {
  // Star center s with leaves; each leaf keeps its only edge.
  auto star = WordGraph::from_named({}, {{"s", "a", 0.9}, {"s", "b", 0.8}, {"s", "c", 0.7}});
  CHECK(prune_top_m(star, 1).edge_count() == 3);

  auto g = WordGraph::from_named({}, {{"a", "b", 0.9}, {"a", "c", 0.5}, {"b", "c", 0.4},
                                      {"c", "d", 0.5}, {"b", "d", 0.1}});
  auto p = prune_top_m(g, 1);
  auto kept = edge_map(p);
  CHECK(kept.size() == 3);
  CHECK(kept.count({"a", "b"}));
  CHECK(kept.count({"a", "c"}));  // c ties a and d at 0.5; a is smaller
  CHECK(kept.count({"c", "d"}));  // d's best
  CHECK_THROWS_AS(prune_top_m(g, 0), Error);
}

TEST_CASE("remove isolated") {
  auto g = WordGraph::from_named({"x", "y"}, {{"a", "b", 0.3}});
  auto r = remove_isolated(g);
  CHECK(r.nodes() == std::vector<std::string>{"a", "b"});
  CHECK(r.edge_count() == 1);
}

TEST_CASE("pruning contracts on random weighted graphs") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 28);
    auto g = synth::random_weighted_graph(rng, n, 0.6);
    const auto all = edge_map(g);

    auto zero = prune_percentile(g, 0);
    CHECK(edge_map(zero) == all);

    std::vector<double> ranks{0, 10, 25, 50, 50, 75, 80, 90, 100};
    std::map<EdgeKey, double> prev = all;
    for (double r : ranks) {
      std::vector<double> w;
      for (const auto& e : g.edges()) w.push_back(e.weight);
      const double t = percentile_threshold(w, r);
      auto p = prune_percentile(g, r);
      auto kept = edge_map(p);
      for (const auto& [k, weight] : kept) {
        CHECK(weight >= t);
        CHECK(prev.count(k));
      }
      for (const auto& [k, weight] : all) {
        if (weight >= t) CHECK(kept.count(k));
      }
      for (std::size_t i = 0; i < p.node_count(); ++i) CHECK(p.adjacency().degree(i) > 0);
      prev = kept;
    }

    for (std::size_t m = 1; m <= 4; ++m) {
      auto p = prune_top_m(g, m);
      std::set<EdgeKey> got;
      for (const auto& [k, w] : edge_map(p)) got.insert(k);
      CHECK(got == top_m_oracle(g, m));
    }
  }
}

TEST_CASE("edge list output") {
  auto g = WordGraph::from_named({}, {{"b", "a", 0.25}, {"a", "c", -0.5}});
  std::ostringstream out;
  write_edge_list(out, g);
  CHECK(out.str() == "a\tb\t0.250000000\na\tc\t-0.500000000\n");
}

TEST_CASE("induced subgraph") {
  auto g = WordGraph::from_named({}, {{"a", "b", 0.1}, {"b", "c", 0.2}, {"a", "c", 0.3}, {"c", "d", 0.4}});
  auto s = g.induced(std::vector<std::string>{"a", "c", "d"});
  CHECK(s.node_count() == 3);
  CHECK(s.edge_count() == 2);
  CHECK(*s.weight("c", "d") == 0.4);
  CHECK_FALSE(s.weight("a", "b"));
}
