#include "kcomp/topics.hpp"

#include <algorithm>
#include <cmath>

#include "kcomp/error.hpp"

namespace kcomp {

std::string_view to_string(TopicSource source) {
  switch (source) {
    case TopicSource::KComponent: return "kcomponent";
    case TopicSource::KMeans: return "kmeans";
    case TopicSource::External: return "external";
  }
  return "external";
}

TopicSource parse_topic_source(std::string_view name) {
  if (name == "kcomponent") return TopicSource::KComponent;
  if (name == "kmeans") return TopicSource::KMeans;
  if (name == "external") return TopicSource::External;
  throw data_error("unknown topic source '" + std::string(name) + "'");
}

RepresentativeMode parse_representative_mode(std::string_view name) {
  if (name == "deg") return RepresentativeMode::Degree;
  if (name == "tvs") return RepresentativeMode::Tvs;
  throw usage_error("unknown representative mode '" + std::string(name) +
                    "' (expected deg or tvs)");
}

std::string_view to_string(RepresentativeMode mode) {
  return mode == RepresentativeMode::Degree ? "deg" : "tvs";
}

TopicExtraction components_to_topics(const std::vector<NodeSet>& components,
                                     std::size_t level, std::size_t min_words) {
  TopicExtraction out;
  for (const auto& c : components) {
    if (c.size() < min_words) {
      ++out.dropped;
      continue;
    }
    Topic t;
    t.id = "K" + std::to_string(level) + "-" + std::to_string(out.topics.size());
    t.source = TopicSource::KComponent;
    t.level = level;
    t.members = c;
    std::sort(t.members.begin(), t.members.end());
    out.topics.push_back(std::move(t));
  }
  return out;
}

std::vector<std::string> rank_by_degree(const NodeSet& members, const WordGraph& g) {
  const WordGraph sub = g.induced(members);
  std::vector<std::size_t> degree(sub.node_count(), 0);
  std::vector<double> weighted(sub.node_count(), 0.0);
  for (const auto& e : sub.edges()) {
    ++degree[e.u];
    ++degree[e.v];
    weighted[e.u] += e.weight;
    weighted[e.v] += e.weight;
  }
  std::vector<std::uint32_t> order(sub.node_count());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  // Node indices follow name order, so the final key is lexicographic.
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (degree[a] != degree[b]) return degree[a] > degree[b];
    if (weighted[a] != weighted[b]) return weighted[a] > weighted[b];
    return a < b;
  });
  std::vector<std::string> ranked;
  ranked.reserve(order.size());
  for (auto i : order) ranked.push_back(sub.node(i));
  return ranked;
}

namespace {

std::vector<std::string> prefix(std::vector<std::string> ranked, std::size_t top_n) {
  if (ranked.size() > top_n) ranked.resize(top_n);
  return ranked;
}

}  // namespace

std::vector<std::string> representatives_by_degree(const Topic& topic, const WordGraph& g,
                                                   std::size_t top_n) {
  return prefix(rank_by_degree(topic.members, g), top_n);
}

std::vector<double> topic_vector(const NodeSet& members, const EmbeddingTable& emb) {
  if (members.empty()) throw usage_error("topic vector of an empty topic");
  std::vector<double> mean(emb.dim(), 0.0);
  for (const auto& w : members) {
    const auto v = emb.vector(w);
    for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += v[d];
  }
  for (double& x : mean) x /= static_cast<double>(members.size());
  return mean;
}

std::vector<std::string> rank_by_tvs(const NodeSet& members, const EmbeddingTable& emb) {
  const auto centre = topic_vector(members, emb);
  if (std::all_of(centre.begin(), centre.end(), [](double x) { return x == 0.0; })) {
    throw data_error("topic vector has zero norm");
  }
  std::vector<std::pair<double, std::string>> scored;
  scored.reserve(members.size());
  for (const auto& w : members) scored.emplace_back(cosine(emb.vector(w), centre), w);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::string> ranked;
  ranked.reserve(scored.size());
  for (auto& [score, w] : scored) ranked.push_back(std::move(w));
  return ranked;
}

std::vector<std::string> representatives_by_tvs(const Topic& topic, const EmbeddingTable& emb,
                                                std::size_t top_n) {
  return prefix(rank_by_tvs(topic.members, emb), top_n);
}

void assign_representatives(Topic& topic, RepresentativeMode mode, const WordGraph* g,
                            const EmbeddingTable& emb, std::size_t top_n) {
  if (mode == RepresentativeMode::Degree) {
    if (g == nullptr) throw usage_error("degree ranking needs the topic graph");
    topic.ranking = rank_by_degree(topic.members, *g);
  } else {
    topic.ranking = rank_by_tvs(topic.members, emb);
  }
  topic.representatives = prefix(topic.ranking, top_n);
}

}  // namespace kcomp
