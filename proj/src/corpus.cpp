#include "kcomp/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

#include "kcomp/error.hpp"
#include "random.hpp"

namespace kcomp {

namespace {

bool is_ascii_alpha(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot read " + path.string());
  return in;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::size_t Corpus::token_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : segments) n += s.tokens.size();
  return n;
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "plain-lines") return CorpusFormat::PlainLines;
  if (name == "labeled-tsv") return CorpusFormat::LabeledTsv;
  throw usage_error("unknown corpus format '" + std::string(name) +
                    "' (expected plain-lines or labeled-tsv)");
}

PosMode parse_pos_mode(std::string_view name) {
  if (name == "nouns") return PosMode::Nouns;
  if (name == "all") return PosMode::All;
  throw usage_error("unknown POS mode '" + std::string(name) +
                    "' (expected nouns or all)");
}

std::string_view to_string(CorpusFormat format) {
  return format == CorpusFormat::PlainLines ? "plain-lines" : "labeled-tsv";
}

std::string_view to_string(PosMode mode) {
  return mode == PosMode::Nouns ? "nouns" : "all";
}

void PosMap::set(std::string word, std::string tag) {
  if (tag.empty()) throw data_error("empty POS tag for '" + word + "'");
  tags_.try_emplace(std::move(word), std::move(tag));
}

std::optional<std::string_view> PosMap::tag(std::string_view word) const {
  auto it = tags_.find(word);
  if (it == tags_.end()) return std::nullopt;
  return std::string_view(it->second);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (is_ascii_alpha(c)) {
      current.push_back(static_cast<char>(c | 0x20));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Corpus parse_corpus(std::istream& in, CorpusFormat format, std::string name) {
  Corpus corpus;
  corpus.name = std::move(name);
  StringSet seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    Segment seg;
    if (format == CorpusFormat::PlainLines) {
      seg.id = std::to_string(line_no);
      seg.tokens = tokenize(line);
    } else {
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      const auto tab1 = line.find('\t');
      const auto tab2 =
          tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
      if (tab2 == std::string::npos) {
        throw data_error(corpus.name + ":" + std::to_string(line_no) +
                         ": expected id<TAB>label<TAB>text");
      }
      seg.id = line.substr(0, tab1);
      if (seg.id.empty()) {
        throw data_error(corpus.name + ":" + std::to_string(line_no) +
                         ": empty segment id");
      }
      std::string label = line.substr(tab1 + 1, tab2 - tab1 - 1);
      if (!label.empty()) seg.gold_label = std::move(label);
      seg.tokens = tokenize(std::string_view(line).substr(tab2 + 1));
      if (!seen_ids.insert(seg.id).second) {
        throw data_error(corpus.name + ":" + std::to_string(line_no) +
                         ": duplicate segment id '" + seg.id + "'");
      }
    }
    if (!seg.tokens.empty()) corpus.segments.push_back(std::move(seg));
  }
  if (in.bad()) throw data_error("read error in " + corpus.name);
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  auto in = open_input(path);
  return parse_corpus(in, format, path.string());
}

PosMap parse_pos_map(std::istream& in) {
  PosMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw data_error("POS map line " + std::to_string(line_no) +
                       ": expected word<TAB>TAG");
    }
    std::string word = line.substr(0, tab);
    std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) {
      return static_cast<char>(is_ascii_alpha(c) ? (c | 0x20) : c);
    });
    map.set(std::move(word), line.substr(tab + 1));
  }
  return map;
}

PosMap load_pos_map(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_pos_map(in);
}

Corpus filter_pos(const Corpus& corpus, const PosMap* pos_map, PosMode mode) {
  if (mode == PosMode::All) return corpus;
  if (pos_map == nullptr) throw usage_error("nouns mode requires a POS map");
  Corpus out;
  out.name = corpus.name;
  for (const auto& seg : corpus.segments) {
    Segment kept{seg.id, {}, seg.gold_label};
    for (const auto& tok : seg.tokens) {
      auto tag = pos_map->tag(tok);
      if (tag && tag->starts_with("NN")) kept.tokens.push_back(tok);
    }
    if (!kept.tokens.empty()) out.segments.push_back(std::move(kept));
  }
  return out;
}

Vocabulary::Vocabulary(std::vector<Term> terms, std::size_t num_segments)
    : num_segments_(num_segments) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    if (a.tf != b.tf) return a.tf > b.tf;
    return a.word < b.word;
  });
  words_.reserve(terms.size());
  for (auto& t : terms) {
    if (t.df > t.tf) throw usage_error("df exceeds tf for '" + t.word + "'");
    if (t.df > num_segments) {
      throw usage_error("df exceeds segment count for '" + t.word + "'");
    }
    if (!index_.emplace(t.word, words_.size()).second) {
      throw usage_error("duplicate vocabulary word '" + t.word + "'");
    }
    const double idf =
        t.df == 0 ? 0.0
                  : std::log(static_cast<double>(num_segments) /
                             static_cast<double>(t.df));
    tf_.push_back(t.tf);
    df_.push_back(t.df);
    tfidf_.push_back(static_cast<double>(t.tf) * idf);
    words_.push_back(std::move(t.word));
  }
}

std::optional<std::size_t> Vocabulary::index(std::string_view word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_count) {
  if (min_count == 0) throw usage_error("min_count must be positive");
  if (corpus.empty()) throw data_error("cannot build a vocabulary from an empty corpus");
  struct Tally {
    Term term;
    std::size_t last_segment = SIZE_MAX;
  };
  StringMap<Tally> counts;
  for (std::size_t s = 0; s < corpus.segments.size(); ++s) {
    for (const auto& tok : corpus.segments[s].tokens) {
      auto [it, inserted] = counts.try_emplace(tok);
      Tally& t = it->second;
      if (inserted) t.term.word = tok;
      ++t.term.tf;
      if (t.last_segment != s) {
        t.last_segment = s;
        ++t.term.df;
      }
    }
  }
  std::vector<Term> terms;
  for (auto& [word, tally] : counts) {
    if (tally.term.tf >= min_count) terms.push_back(std::move(tally.term));
  }
  if (terms.empty()) {
    throw data_error("no word reaches min_count=" + std::to_string(min_count));
  }
  return Vocabulary(std::move(terms), corpus.size());
}

Corpus restrict_to(const Corpus& corpus, const Vocabulary& vocab) {
  Corpus out;
  out.name = corpus.name;
  for (const auto& seg : corpus.segments) {
    Segment kept{seg.id, {}, seg.gold_label};
    for (const auto& tok : seg.tokens) {
      if (vocab.contains(tok)) kept.tokens.push_back(tok);
    }
    if (!kept.tokens.empty()) out.segments.push_back(std::move(kept));
  }
  return out;
}

HoldoutSplit split_holdout(const Corpus& corpus, double holdout_fraction,
                           std::uint64_t seed) {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw usage_error("holdout fraction must be in (0, 1)");
  }
  const std::size_t n = corpus.size();
  if (n < 2) throw data_error("a hold-back split needs at least 2 segments");
  auto h = static_cast<std::size_t>(std::llround(holdout_fraction * static_cast<double>(n)));
  h = std::clamp<std::size_t>(h, 1, n - 1);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  detail::Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(i + 1)]);
  }
  std::vector<bool> in_holdout(n, false);
  for (std::size_t i = 0; i < h; ++i) in_holdout[order[i]] = true;

  HoldoutSplit split;
  split.train.name = corpus.name + "#train";
  split.holdout.name = corpus.name + "#holdout";
  for (std::size_t i = 0; i < n; ++i) {
    (in_holdout[i] ? split.holdout : split.train).segments.push_back(corpus.segments[i]);
  }
  return split;
}

}  // namespace kcomp
