#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kcomp/corpus.hpp"
#include "kcomp/strings.hpp"
#include "kcomp/topics.hpp"

namespace kcomp {

enum class UnitKind { Document, SlidingWindow };

constexpr std::size_t kCvWindow = 110;
constexpr double kNpmiEpsilon = 1e-12;

struct CooccurrenceUnit {
  UnitKind kind = UnitKind::Document;
  std::size_t window = kCvWindow;

  static CooccurrenceUnit document() { return {UnitKind::Document, 0}; }
  static CooccurrenceUnit sliding(std::size_t size = kCvWindow) {
    return {UnitKind::SlidingWindow, size};
  }
};

/// Boolean occurrence counts over units (segments or sliding windows): a
/// word counts once per unit it appears in.
class CooccurrenceStats {
 public:
  CooccurrenceUnit unit() const noexcept { return unit_; }
  std::uint64_t total_units() const noexcept { return total_units_; }
  std::uint64_t count(std::string_view word) const;
  /// joint(w, w) == count(w).
  std::uint64_t joint(std::string_view a, std::string_view b) const;

 private:
  friend CooccurrenceStats collect_stats(const Corpus&, CooccurrenceUnit,
                                         const StringSet*);
  CooccurrenceUnit unit_;
  std::uint64_t total_units_ = 0;
  StringMap<std::uint32_t> ids_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::uint64_t, std::uint64_t> joint_;
};

/// Segments shorter than a sliding window contribute a single window.
/// When `only` is given, words outside it are not tracked.
CooccurrenceStats collect_stats(const Corpus& corpus, CooccurrenceUnit unit,
                                const StringSet* only = nullptr);

/// u_mass over ordered words: the mean over pairs j < i of
/// log((D(w_i, w_j) + 1) / D(w_j)); pairs with D(w_j) = 0 are skipped.
/// nullopt when fewer than two words occur in the stats.
std::optional<double> umass(std::span<const std::string> words,
                            const CooccurrenceStats& stats);

/// Normalized PMI with epsilon smoothing; exactly -1 when the pair never
/// co-occurs. Throws when either marginal is zero.
double npmi(std::string_view a, std::string_view b,
            const CooccurrenceStats& stats);

/// c_v with one-set segmentation, NPMI context vectors and cosine
/// confirmation, averaged over words. Words absent from the stats are
/// skipped; nullopt when fewer than two remain. Values outside [0, 1] are
/// clamped and flagged through `clamped`.
std::optional<double> cv(std::span<const std::string> words,
                         const CooccurrenceStats& stats,
                         bool* clamped = nullptr);

struct TopicScores {
  std::string topic_id;
  TopicSource source = TopicSource::KComponent;
  std::optional<double> umass;
  std::optional<double> cv_in;
  std::optional<double> cv_ex;
};

struct CoherenceReport {
  std::vector<TopicScores> per_topic;
  std::optional<double> mean_umass;
  std::optional<double> mean_cv_intrinsic;
  std::optional<double> mean_cv_extrinsic;
  std::size_t undefined_umass = 0;
  std::size_t undefined_cv_in = 0;
  std::size_t undefined_cv_ex = 0;
  std::size_t clamped = 0;
  double time_p_seconds = 0.0;
};

struct CoherenceOptions {
  std::size_t top_words = 10;
  std::size_t window = kCvWindow;
};

/// The words scored for a topic: the first top_words of its ranking, or of
/// its representatives when no ranking is stored.
std::vector<std::string> scoring_words(const Topic& topic, std::size_t top_words);

/// u_mass and intrinsic c_v on the training corpus, extrinsic c_v on the
/// hold-back corpus. Means skip undefined scores.
CoherenceReport evaluate(const std::vector<Topic>& topics, const Corpus& train,
                         const Corpus& holdout,
                         const CoherenceOptions& options = {});

}  // namespace kcomp
