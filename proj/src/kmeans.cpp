#include <algorithm>
#include <cmath>
#include <limits>

#include "kcomp/error.hpp"
#include "kcomp/topics.hpp"
#include "random.hpp"

namespace kcomp {

Weighting parse_weighting(std::string_view name) {
  if (name == "tf" || name == "TF") return Weighting::TF;
  if (name == "tfidf" || name == "tf-idf" || name == "TF-IDF") return Weighting::TFIDF;
  throw usage_error("unknown k-means weighting '" + std::string(name) +
                    "' (expected tf or tfidf)");
}

std::string_view to_string(Weighting weighting) {
  return weighting == Weighting::TF ? "tf" : "tfidf";
}

void KMeansConfig::validate() const {
  if (k < 2) throw usage_error("k-means requires k >= 2");
  if (max_iter < 1) throw usage_error("k-means max_iter must be >= 1");
  if (restarts < 1) throw usage_error("k-means restarts must be >= 1");
  if (top_n < 1) throw usage_error("top_n must be >= 1");
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

class Lloyd {
 public:
  Lloyd(const PointSet& points, std::span<const double> weights, std::size_t k)
      : points_(points), weights_(weights), k_(k) {}

  PointSet seed(detail::Rng& rng) const {
    const std::size_t n = points_.size();
    PointSet centroids{points_.dim, {}};
    centroids.data.reserve(k_ * points_.dim);
    std::vector<bool> chosen(n, false);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());

    auto take = [&](std::size_t i) {
      chosen[i] = true;
      const auto row = points_.row(i);
      centroids.data.insert(centroids.data.end(), row.begin(), row.end());
      for (std::size_t j = 0; j < n; ++j) d2[j] = std::min(d2[j], squared_distance(points_.row(j), row));
    };
    auto sample = [&](auto&& mass) -> std::optional<std::size_t> {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) total += mass(i);
      if (!(total > 0.0)) return std::nullopt;
      const double u = rng.uniform() * total;
      double acc = 0.0;
      std::optional<std::size_t> last;
      for (std::size_t i = 0; i < n; ++i) {
        const double m = mass(i);
        if (m <= 0.0) continue;
        acc += m;
        last = i;
        if (acc > u) return i;
      }
      return last;
    };

    auto first = sample([&](std::size_t i) { return weights_[i]; });
    take(first.value_or(0));
    while (centroids.size() < k_) {
      auto next = sample([&](std::size_t i) { return chosen[i] ? 0.0 : weights_[i] * d2[i]; });
      if (!next) {
        // No weighted mass left; fall back to the farthest unchosen point.
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
          if (!chosen[i] && (best == n || d2[i] > d2[best])) best = i;
        }
        next = best;
      }
      take(*next);
    }
    return centroids;
  }

  KMeansRun run(PointSet centroids, std::size_t max_iter) const {
    const std::size_t n = points_.size();
    KMeansRun out;
    out.assignment.assign(n, k_);
    out.centroids = std::move(centroids);
    std::vector<std::size_t> previous;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
      previous = out.assignment;
      assign(out);
      repair_empty(out);
      out.wcss_history.push_back(wcss(out));
      update(out);
      out.wcss_history.push_back(wcss(out));
      out.iterations = iter + 1;
      if (out.assignment == previous) break;
    }
    out.wcss = out.wcss_history.back();
    return out;
  }

 private:
  void assign(KMeansRun& r) const {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k_; ++c) {
        const double d = squared_distance(points_.row(i), r.centroids.row(c));
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      r.assignment[i] = best;
    }
  }

  // Moves the point with the largest weighted squared distance (taken from
  // a cluster that keeps at least one point) into each empty cluster.
  void repair_empty(KMeansRun& r) const {
    std::vector<std::size_t> size(k_, 0);
    for (auto c : r.assignment) ++size[c];
    for (std::size_t c = 0; c < k_; ++c) {
      if (size[c] > 0) continue;
      std::size_t pick = points_.size();
      double pick_cost = -1.0;
      for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto from = r.assignment[i];
        if (size[from] < 2) continue;
        const double cost = weights_[i] * squared_distance(points_.row(i), r.centroids.row(from));
        if (cost > pick_cost) {
          pick_cost = cost;
          pick = i;
        }
      }
      if (pick == points_.size()) continue;
      --size[r.assignment[pick]];
      r.assignment[pick] = c;
      ++size[c];
      const auto row = points_.row(pick);
      std::copy(row.begin(), row.end(), r.centroids.data.begin() + static_cast<std::ptrdiff_t>(c * points_.dim));
    }
  }

  void update(KMeansRun& r) const {
    const std::size_t dim = points_.dim;
    std::vector<double> sum(k_ * dim, 0.0), plain(k_ * dim, 0.0);
    std::vector<double> mass(k_, 0.0);
    std::vector<std::size_t> count(k_, 0);
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto c = r.assignment[i];
      const auto row = points_.row(i);
      for (std::size_t d = 0; d < dim; ++d) {
        sum[c * dim + d] += weights_[i] * row[d];
        plain[c * dim + d] += row[d];
      }
      mass[c] += weights_[i];
      ++count[c];
    }
    std::vector<std::size_t> only(k_, 0);
    for (std::size_t i = 0; i < points_.size(); ++i) only[r.assignment[i]] = i;
    for (std::size_t c = 0; c < k_; ++c) {
      if (count[c] == 0) continue;
      if (count[c] == 1) {
        // Exactly the point, which w * x / w need not reproduce.
        const auto row = points_.row(only[c]);
        std::copy(row.begin(), row.end(), r.centroids.data.begin() + static_cast<std::ptrdiff_t>(c * dim));
        continue;
      }
      for (std::size_t d = 0; d < dim; ++d) {
        // Zero-weight clusters cannot change the objective; use the plain mean.
        r.centroids.data[c * dim + d] = mass[c] > 0.0 ? sum[c * dim + d] / mass[c]
                                                      : plain[c * dim + d] / static_cast<double>(count[c]);
      }
    }
  }

  double wcss(const KMeansRun& r) const {
    double s = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      s += weights_[i] * squared_distance(points_.row(i), r.centroids.row(r.assignment[i]));
    }
    return s;
  }

  const PointSet& points_;
  std::span<const double> weights_;
  std::size_t k_;
};

}  // namespace

KMeansRun weighted_kmeans(const PointSet& points, std::span<const double> weights,
                          std::size_t k, std::uint64_t seed, std::size_t max_iter,
                          std::size_t restarts) {
  const std::size_t n = points.size();
  if (k < 1) throw usage_error("k-means requires k >= 1");
  if (k > n) {
    throw usage_error("k-means k=" + std::to_string(k) + " exceeds the " +
                      std::to_string(n) + " points available");
  }
  if (weights.size() != n) throw usage_error("one weight per point is required");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw data_error("k-means weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw data_error("all k-means weights are zero");
  if (max_iter < 1 || restarts < 1) throw usage_error("k-means needs max_iter, restarts >= 1");

  const Lloyd lloyd(points, weights, k);
  KMeansRun best;
  for (std::size_t r = 0; r < restarts; ++r) {
    detail::Rng rng(detail::derive_seed(seed, r));
    KMeansRun run = lloyd.run(lloyd.seed(rng), max_iter);
    run.restart = r;
    if (r == 0 || run.wcss < best.wcss) best = std::move(run);
  }
  return best;
}

KMeansResult kmeans_weighted(const Vocabulary& vocab, const EmbeddingTable& emb,
                             const KMeansConfig& config) {
  config.validate();
  KMeansResult out;
  PointSet points{emb.dim(), {}};
  std::vector<double> weights;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const auto& w = vocab.word(i);
    if (!emb.contains(w)) continue;
    const auto v = emb.vector(w);
    points.data.insert(points.data.end(), v.begin(), v.end());
    weights.push_back(config.weighting == Weighting::TF ? static_cast<double>(vocab.tf(i))
                                                        : vocab.tfidf(i));
    out.words.push_back(w);
  }
  if (config.k > out.words.size()) {
    throw usage_error("k-means k=" + std::to_string(config.k) + " exceeds the " +
                      std::to_string(out.words.size()) + " embedded vocabulary words");
  }
  out.run = weighted_kmeans(points, weights, config.k, config.seed, config.max_iter,
                            config.restarts);

  std::vector<NodeSet> clusters(config.k);
  for (std::size_t i = 0; i < out.words.size(); ++i) {
    clusters[out.run.assignment[i]].push_back(out.words[i]);
  }
  for (std::size_t c = 0; c < config.k; ++c) {
    auto& members = clusters[c];
    if (members.empty()) continue;
    if (config.enforce_min_words && members.size() < config.min_words) {
      ++out.topics.dropped;
      continue;
    }
    std::sort(members.begin(), members.end());
    Topic t;
    t.id = "kmeans-" + std::to_string(c);
    t.source = TopicSource::KMeans;
    t.cluster_id = c;
    t.members = std::move(members);
    assign_representatives(t, RepresentativeMode::Tvs, nullptr, emb, config.top_n);
    out.topics.topics.push_back(std::move(t));
  }
  return out;
}

}  // namespace kcomp
