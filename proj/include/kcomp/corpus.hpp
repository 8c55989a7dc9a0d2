#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kcomp/strings.hpp"

namespace kcomp {

struct Segment {
  std::string id;
  std::vector<std::string> tokens;
  std::optional<std::string> gold_label;
};

struct Corpus {
  std::string name;
  std::vector<Segment> segments;

  std::size_t size() const noexcept { return segments.size(); }
  bool empty() const noexcept { return segments.empty(); }
  std::size_t token_count() const noexcept;
};

enum class CorpusFormat { PlainLines, LabeledTsv };
enum class PosMode { Nouns, All };

CorpusFormat parse_corpus_format(std::string_view name);
PosMode parse_pos_mode(std::string_view name);
std::string_view to_string(CorpusFormat format);
std::string_view to_string(PosMode mode);

/// Word -> POS tag table produced by an external tagger.
class PosMap {
 public:
  /// First assignment wins; later duplicates are ignored.
  void set(std::string word, std::string tag);

  /// nullopt means "untagged".
  std::optional<std::string_view> tag(std::string_view word) const;

  std::size_t size() const noexcept { return tags_.size(); }

 private:
  StringMap<std::string> tags_;
};

/// Lowercased runs of ASCII letters; everything else is a separator, so
/// digits and punctuation never reach a token.
std::vector<std::string> tokenize(std::string_view text);

Corpus parse_corpus(std::istream& in, CorpusFormat format, std::string name);
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

PosMap parse_pos_map(std::istream& in);
PosMap load_pos_map(const std::filesystem::path& path);

/// In Nouns mode keeps tokens tagged NN*; segments left empty are dropped.
/// All mode is the identity. pos_map may be null only in All mode.
Corpus filter_pos(const Corpus& corpus, const PosMap* pos_map, PosMode mode);

struct Term {
  std::string word;
  std::uint64_t tf = 0;
  std::uint64_t df = 0;
};

/// Ordered vocabulary with corpus statistics. Words are sorted by descending
/// tf, ties lexicographic; tfidf = tf * ln(num_segments / df).
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<Term> terms, std::size_t num_segments);

  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::string& word(std::size_t i) const { return words_.at(i); }
  std::optional<std::size_t> index(std::string_view word) const;
  bool contains(std::string_view word) const { return index(word).has_value(); }

  std::uint64_t tf(std::size_t i) const { return tf_.at(i); }
  std::uint64_t df(std::size_t i) const { return df_.at(i); }
  double tfidf(std::size_t i) const { return tfidf_.at(i); }

  std::size_t num_segments() const noexcept { return num_segments_; }

 private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> tf_;
  std::vector<std::uint64_t> df_;
  std::vector<double> tfidf_;
  StringMap<std::size_t> index_;
  std::size_t num_segments_ = 0;
};

Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_count);

/// Drops tokens outside the vocabulary (and segments left empty).
Corpus restrict_to(const Corpus& corpus, const Vocabulary& vocab);

struct HoldoutSplit {
  Corpus train;
  Corpus holdout;
};

/// Seeded segment-level split. Both sides keep the input order.
HoldoutSplit split_holdout(const Corpus& corpus, double holdout_fraction,
                           std::uint64_t seed);

}  // namespace kcomp
