#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "kcomp/corpus.hpp"
#include "kcomp/error.hpp"

using namespace kcomp;

namespace {

Corpus from_lines(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in, CorpusFormat::PlainLines, "test");
}

Corpus from_tokens(const std::vector<std::vector<std::string>>& segs) {
  Corpus c;
  c.name = "tokens";
  for (std::size_t i = 0; i < segs.size(); ++i) c.segments.push_back({std::to_string(i + 1), segs[i], {}});
  return c;
}

}  // namespace

TEST_CASE("tokenizer lowercases and drops digits and punctuation") {
  CHECK(tokenize("The engine, 2.0L turbo!") == std::vector<std::string>{"the", "engine", "l", "turbo"});
  CHECK(tokenize("") .empty());
  CHECK(tokenize("42 3.14 !!") .empty());
  CHECK(tokenize("caf\xc3\xa9 ok") == std::vector<std::string>{"caf", "ok"});
}

TEST_CASE("plain-lines corpus") {
  auto c = from_lines("The engine, 2.0L turbo!\n\n123\nnice seats\r\n");
  REQUIRE(c.size() == 2);
  CHECK(c.segments[0].id == "1");
  CHECK(c.segments[0].tokens == std::vector<std::string>{"the", "engine", "l", "turbo"});
  CHECK(c.segments[1].id == "4");
  CHECK(c.segments[1].tokens == std::vector<std::string>{"nice", "seats"});
  CHECK_FALSE(c.segments[0].gold_label);
}

TEST_CASE("empty file gives an empty corpus") { CHECK(from_lines("").empty()); }

TEST_CASE("labeled tsv corpus") {
  std::istringstream in("s1\tPerformance\tgreat turbo engine\ns2\t\tno label here\n");
  auto c = parse_corpus(in, CorpusFormat::LabeledTsv, "tsv");
  REQUIRE(c.size() == 2);
  CHECK(c.segments[0].id == "s1");
  CHECK(c.segments[0].gold_label == "Performance");
  CHECK(c.segments[0].tokens == std::vector<std::string>{"great", "turbo", "engine"});
  CHECK_FALSE(c.segments[1].gold_label);
}

TEST_CASE("malformed tsv reports the line") {
  std::istringstream in("s1\tA\tfine\nbroken row\n");
  try {
    parse_corpus(in, CorpusFormat::LabeledTsv, "tsv");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Data);
    CHECK(std::string(e.what()).find("tsv:2") != std::string::npos);
  }
  std::istringstream dup("s1\tA\tx\ns1\tB\ty\n");
  CHECK_THROWS_AS(parse_corpus(dup, CorpusFormat::LabeledTsv, "tsv"), Error);
}

TEST_CASE("unreadable corpus file") {
  CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.txt", CorpusFormat::PlainLines), Error);
}

TEST_CASE("format names") {
  CHECK(parse_corpus_format("labeled-tsv") == CorpusFormat::LabeledTsv);
  CHECK(to_string(CorpusFormat::PlainLines) == "plain-lines");
  CHECK(parse_pos_mode("nouns") == PosMode::Nouns);
  CHECK_THROWS_AS(parse_corpus_format("xml"), Error);
}

TEST_CASE("pos filter") {
  PosMap tags;
  tags.set("great", "JJ");
  tags.set("turbo", "NN");
  tags.set("engine", "NNS");
  auto c = from_tokens({{"great", "turbo", "engine"}, {"great"}, {"wheel"}});
  auto nouns = filter_pos(c, &tags, PosMode::Nouns);
  REQUIRE(nouns.size() == 1);
  CHECK(nouns.segments[0].tokens == std::vector<std::string>{"turbo", "engine"});

  auto empty_tags = PosMap{};
  CHECK(filter_pos(from_tokens({{"turbo"}}), &empty_tags, PosMode::Nouns).empty());
  CHECK_THROWS_AS(filter_pos(c, nullptr, PosMode::Nouns), Error);

  auto all = filter_pos(c, nullptr, PosMode::All);
  REQUIRE(all.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(all.segments[i].tokens == c.segments[i].tokens);
}

TEST_CASE("pos map file") {
  std::istringstream in("Turbo\tNN\nturbo\tJJ\nfast\tJJ\n");
  auto m = parse_pos_map(in);
  CHECK(m.tag("turbo") == "NN");
  CHECK(m.tag("fast") == "JJ");
  CHECK_FALSE(m.tag("missing"));
  std::istringstream bad("word\n");
  CHECK_THROWS_AS(parse_pos_map(bad), Error);
}

TEST_CASE("vocabulary counts") {
  auto c = from_tokens({{"a", "b", "a"}, {"b", "c"}});
  auto v = build_vocabulary(c, 1);
  REQUIRE(v.words() == std::vector<std::string>{"a", "b", "c"});
  CHECK(v.tf(0) == 2);
  CHECK(v.tf(1) == 2);
  CHECK(v.tf(2) == 1);
  CHECK(v.df(0) == 1);
  CHECK(v.df(1) == 2);
  CHECK(v.df(2) == 1);
  CHECK(v.tfidf(1) == 0.0);
  CHECK(v.tfidf(0) == doctest::Approx(2 * std::log(2.0)).epsilon(1e-15));

  auto v2 = build_vocabulary(c, 2);
  CHECK(v2.words() == std::vector<std::string>{"a", "b"});
  CHECK_THROWS_AS(build_vocabulary(c, 3), Error);
  CHECK_THROWS_AS(build_vocabulary(Corpus{}, 1), Error);
}

TEST_CASE("vocabulary matches a recount on random corpora") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> word(0, 14), len(1, 20), segs(1, 30);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<std::string>> raw(static_cast<std::size_t>(segs(rng)));
    for (auto& s : raw) {
      const int n = len(rng);
      for (int i = 0; i < n; ++i) s.push_back(std::string(1, static_cast<char>('a' + word(rng))));
    }
    auto c = from_tokens(raw);
    auto v = build_vocabulary(c, 1);
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::uint64_t tf = 0, df = 0;
      for (const auto& s : raw) {
        auto n = std::count(s.begin(), s.end(), v.word(i));
        tf += static_cast<std::uint64_t>(n);
        df += n > 0;
      }
      CHECK(v.tf(i) == tf);
      CHECK(v.df(i) == df);
      CHECK(v.tf(i) >= v.df(i));
      CHECK(v.df(i) <= c.size());
      CHECK(v.tfidf(i) >= 0.0);
      if (i > 0) {
        CHECK((v.tf(i - 1) > v.tf(i) || (v.tf(i - 1) == v.tf(i) && v.word(i - 1) < v.word(i))));
      }
    }
    auto again = build_vocabulary(c, 1);
    CHECK(again.words() == v.words());
  }
}

TEST_CASE("restrict_to drops out-of-vocabulary tokens") {
  auto c = from_tokens({{"a", "b", "a"}, {"c"}});
  auto v = build_vocabulary(c, 2);
  auto r = restrict_to(c, v);
  REQUIRE(r.size() == 1);
  CHECK(r.segments[0].tokens == std::vector<std::string>{"a", "a"});
}

TEST_CASE("holdout split") {
  std::vector<std::vector<std::string>> raw;
  for (int i = 0; i < 10; ++i) raw.push_back({"w" + std::string(1, static_cast<char>('a' + i))});
  auto c = from_tokens(raw);
  auto s = split_holdout(c, 0.2, 7);
  CHECK(s.train.size() == 8);
  CHECK(s.holdout.size() == 2);
  std::set<std::string> ids;
  for (const auto& seg : s.train.segments) ids.insert(seg.id);
  for (const auto& seg : s.holdout.segments) CHECK(ids.insert(seg.id).second);
  CHECK(ids.size() == 10);

  auto s2 = split_holdout(c, 0.2, 7);
  for (std::size_t i = 0; i < s.holdout.size(); ++i) CHECK(s.holdout.segments[i].id == s2.holdout.segments[i].id);

  auto two = split_holdout(from_tokens({{"a"}, {"b"}}), 0.1, 1);
  CHECK(two.train.size() == 1);
  CHECK(two.holdout.size() == 1);

  CHECK_THROWS_AS(split_holdout(c, 0.0, 1), Error);
  CHECK_THROWS_AS(split_holdout(c, 1.0, 1), Error);
  CHECK_THROWS_AS(split_holdout(from_tokens({{"a"}}), 0.5, 1), Error);
}

TEST_CASE("holdout split is a partition for many seeds") {
  std::vector<std::vector<std::string>> raw(37, std::vector<std::string>{"x"});
  auto c = from_tokens(raw);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto s = split_holdout(c, 0.3, seed);
    CHECK(s.holdout.size() == 11);
    std::set<std::string> ids;
    for (const auto& seg : s.train.segments) ids.insert(seg.id);
    for (const auto& seg : s.holdout.segments) ids.insert(seg.id);
    CHECK(ids.size() == 37);
  }
}
