#include "kcomp/coherence.hpp"

#include <algorithm>
#include <cmath>

#include "kcomp/error.hpp"

namespace kcomp {

namespace {

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

std::uint64_t CooccurrenceStats::count(std::string_view word) const {
  auto it = ids_.find(word);
  return it == ids_.end() ? 0 : counts_[it->second];
}

std::uint64_t CooccurrenceStats::joint(std::string_view a, std::string_view b) const {
  auto ia = ids_.find(a), ib = ids_.find(b);
  if (ia == ids_.end() || ib == ids_.end()) return 0;
  if (ia->second == ib->second) return counts_[ia->second];
  auto it = joint_.find(pair_key(ia->second, ib->second));
  return it == joint_.end() ? 0 : it->second;
}

CooccurrenceStats collect_stats(const Corpus& corpus, CooccurrenceUnit unit,
                                const StringSet* only) {
  if (corpus.empty()) throw data_error("co-occurrence statistics need a non-empty corpus");
  if (unit.kind == UnitKind::SlidingWindow && unit.window < 1) {
    throw usage_error("sliding window size must be >= 1");
  }
  CooccurrenceStats stats;
  stats.unit_ = unit;

  std::vector<std::uint32_t> ids;
  std::vector<std::uint32_t> in_unit;
  auto record = [&](std::size_t begin, std::size_t end) {
    in_unit.assign(ids.begin() + static_cast<std::ptrdiff_t>(begin),
                   ids.begin() + static_cast<std::ptrdiff_t>(end));
    std::sort(in_unit.begin(), in_unit.end());
    in_unit.erase(std::unique(in_unit.begin(), in_unit.end()), in_unit.end());
    while (!in_unit.empty() && in_unit.back() == UINT32_MAX) in_unit.pop_back();
    for (std::size_t i = 0; i < in_unit.size(); ++i) {
      ++stats.counts_[in_unit[i]];
      for (std::size_t j = i + 1; j < in_unit.size(); ++j) {
        ++stats.joint_[pair_key(in_unit[i], in_unit[j])];
      }
    }
    ++stats.total_units_;
  };

  for (const auto& seg : corpus.segments) {
    ids.clear();
    for (const auto& tok : seg.tokens) {
      if (only != nullptr && !only->contains(tok)) {
        ids.push_back(UINT32_MAX);
        continue;
      }
      auto [it, inserted] = stats.ids_.try_emplace(tok, static_cast<std::uint32_t>(stats.counts_.size()));
      if (inserted) stats.counts_.push_back(0);
      ids.push_back(it->second);
    }
    const std::size_t n = ids.size();
    if (unit.kind == UnitKind::Document || n <= unit.window) {
      record(0, n);
    } else {
      for (std::size_t start = 0; start + unit.window <= n; ++start) {
        record(start, start + unit.window);
      }
    }
  }
  return stats;
}

std::optional<double> umass(std::span<const std::string> words,
                            const CooccurrenceStats& stats) {
  std::size_t present = 0;
  for (const auto& w : words) present += stats.count(w) > 0;
  if (present < 2) return std::nullopt;
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 1; i < words.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const auto cj = stats.count(words[j]);
      if (cj == 0) continue;
      const auto joint = stats.joint(words[i], words[j]);
      sum += std::log((static_cast<double>(joint) + 1.0) / static_cast<double>(cj));
      ++pairs;
    }
  }
  if (pairs == 0) return std::nullopt;
  return sum / static_cast<double>(pairs);
}

double npmi(std::string_view a, std::string_view b, const CooccurrenceStats& stats) {
  const auto ca = stats.count(a), cb = stats.count(b);
  if (ca == 0 || cb == 0) {
    throw data_error("NPMI of a word that never occurs ('" +
                     std::string(ca == 0 ? a : b) + "')");
  }
  const auto joint = stats.joint(a, b);
  if (joint == 0) return -1.0;
  const auto total = stats.total_units();
  // Both words in every unit: the smoothed ratio degenerates to 0/0; the
  // limit of the unsmoothed measure is 1.
  if (joint == total) return 1.0;
  const double n = static_cast<double>(total);
  const double pa = static_cast<double>(ca) / n;
  const double pb = static_cast<double>(cb) / n;
  const double pab = static_cast<double>(joint) / n;
  return std::log((pab + kNpmiEpsilon) / (pa * pb)) / -std::log(pab + kNpmiEpsilon);
}

std::optional<double> cv(std::span<const std::string> words, const CooccurrenceStats& stats,
                         bool* clamped) {
  if (clamped != nullptr) *clamped = false;
  std::vector<std::string_view> present;
  for (const auto& w : words) {
    if (stats.count(w) == 0) continue;
    if (std::find(present.begin(), present.end(), w) != present.end()) continue;
    present.push_back(w);
  }
  const std::size_t n = present.size();
  if (n < 2) return std::nullopt;

  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      m[i * n + j] = m[j * n + i] = npmi(present[i], present[j], stats);
    }
  }
  std::vector<double> total(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) total[j] += m[i * n + j];
  }
  double total_norm = 0.0;
  for (double x : total) total_norm += x * x;
  total_norm = std::sqrt(total_norm);

  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dot = 0.0, norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      dot += m[i * n + j] * total[j];
      norm += m[i * n + j] * m[i * n + j];
    }
    if (norm > 0.0 && total_norm > 0.0) sum += dot / (std::sqrt(norm) * total_norm);
  }
  double value = sum / static_cast<double>(n);
  if (value < 0.0 || value > 1.0) {
    if (clamped != nullptr && (value < -1e-12 || value > 1.0 + 1e-12)) *clamped = true;
    value = std::clamp(value, 0.0, 1.0);
  }
  return value;
}

std::vector<std::string> scoring_words(const Topic& topic, std::size_t top_words) {
  const auto& source = !topic.ranking.empty()           ? topic.ranking
                       : !topic.representatives.empty() ? topic.representatives
                                                        : topic.members;
  std::vector<std::string> words(source.begin(),
                                 source.begin() + static_cast<std::ptrdiff_t>(
                                                      std::min(top_words, source.size())));
  return words;
}

CoherenceReport evaluate(const std::vector<Topic>& topics, const Corpus& train,
                         const Corpus& holdout, const CoherenceOptions& options) {
  if (topics.empty()) throw usage_error("no topics to evaluate");
  if (options.top_words < 2) throw usage_error("coherence needs at least 2 words per topic");

  std::vector<std::vector<std::string>> scored;
  StringSet tracked;
  for (const auto& t : topics) {
    scored.push_back(scoring_words(t, options.top_words));
    tracked.insert(scored.back().begin(), scored.back().end());
  }
  const auto doc = collect_stats(train, CooccurrenceUnit::document(), &tracked);
  const auto win_in = collect_stats(train, CooccurrenceUnit::sliding(options.window), &tracked);
  const auto win_ex = collect_stats(holdout, CooccurrenceUnit::sliding(options.window), &tracked);

  CoherenceReport report;
  double sum_umass = 0.0, sum_in = 0.0, sum_ex = 0.0;
  std::size_t n_umass = 0, n_in = 0, n_ex = 0;
  for (std::size_t i = 0; i < topics.size(); ++i) {
    TopicScores s;
    s.topic_id = topics[i].id;
    s.source = topics[i].source;
    bool clamped_in = false, clamped_ex = false;
    s.umass = umass(scored[i], doc);
    s.cv_in = cv(scored[i], win_in, &clamped_in);
    s.cv_ex = cv(scored[i], win_ex, &clamped_ex);
    report.clamped += clamped_in + clamped_ex;
    if (s.umass) { sum_umass += *s.umass; ++n_umass; } else { ++report.undefined_umass; }
    if (s.cv_in) { sum_in += *s.cv_in; ++n_in; } else { ++report.undefined_cv_in; }
    if (s.cv_ex) { sum_ex += *s.cv_ex; ++n_ex; } else { ++report.undefined_cv_ex; }
    report.per_topic.push_back(std::move(s));
  }
  if (n_umass > 0) report.mean_umass = sum_umass / static_cast<double>(n_umass);
  if (n_in > 0) report.mean_cv_intrinsic = sum_in / static_cast<double>(n_in);
  if (n_ex > 0) report.mean_cv_extrinsic = sum_ex / static_cast<double>(n_ex);
  return report;
}

}  // namespace kcomp
