#include <doctest.h>

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kcomp/error.hpp"
#include "kcomp/pipeline.hpp"
#include "synthetic.hpp"

using namespace kcomp;

namespace {

const std::filesystem::path kFixtures = KCOMP_FIXTURES;

std::string mask_timing(const std::string& s) {
  static const std::regex json_time("\"time_p_seconds\": [-+0-9.eE]+");
  static const std::regex csv_time("time_p=[0-9.]+");
  return std::regex_replace(std::regex_replace(s, json_time, "\"time_p_seconds\": T"), csv_time,
                            "time_p=T");
}

Topic make_topic(const std::string& id, TopicSource source) {
  Topic t;
  t.id = id;
  t.source = source;
  t.members = {"a", "b", "c", "d", "e", "f"};
  return t;
}

RunReport gold_fixture_report() {
  RunReport r;
  r.command = "extract";
  TopicSetResult kc;
  kc.name = "K=1";
  for (int i = 0; i < 6; ++i) kc.topics.push_back(make_topic("K1-" + std::to_string(i), TopicSource::KComponent));
  kc.topic_count = 6;
  TopicSetResult km;
  km.name = "k=8";
  km.method = TopicSource::KMeans;
  for (int i = 0; i < 8; ++i) km.topics.push_back(make_topic("kmeans-" + std::to_string(i), TopicSource::KMeans));
  km.topic_count = 8;
  r.results = {kc, km};
  return r;
}

}  // namespace

TEST_CASE("config from TOML") {
  const std::string doc = R"(
seed = 7
[corpus]
path = "data/corpus.tsv"
format = "labeled-tsv"
holdout_fraction = 0.25
pos_map = "tags.tsv"
pos_mode = "nouns"
min_count = 3
[embeddings]
source = "load"
path = "/abs/vectors.bin"
format = "word2vec-binary"
[graph]
prune = "top_m"
top_m = 4
[kcomponents]
k_max = 2
[topics]
representatives = "deg"
top_n = 7
[coherence]
top_words = 8
[baseline]
k = 12
weighting = "tfidf"
restarts = 2
)";
  auto c = parse_config(doc, "/base");
  CHECK(c.seed == 7);
  CHECK(c.corpus == "/base/data/corpus.tsv");
  CHECK(c.corpus_format == CorpusFormat::LabeledTsv);
  CHECK(c.holdout_fraction == 0.25);
  CHECK(c.pos_map == std::filesystem::path("/base/tags.tsv"));
  CHECK(c.pos_mode == PosMode::Nouns);
  CHECK(c.min_count == 3);
  CHECK(c.embedding_source == EmbeddingSource::Load);
  CHECK(c.embeddings == "/abs/vectors.bin");
  CHECK(c.embeddings_format == EmbeddingFormat::Word2VecBinary);
  CHECK(c.prune == PruneStrategy::TopM);
  CHECK(c.top_m == 4);
  CHECK(c.k_max == 2);
  CHECK(c.representatives == RepresentativeMode::Degree);
  CHECK(c.top_n == 7);
  CHECK(c.coherence_words == 8);
  REQUIRE(c.baseline);
  CHECK(c.baseline->k == 12);
  CHECK(c.baseline->weighting == Weighting::TFIDF);
  CHECK(c.baseline->restarts == 2);
  c.validate();

  auto copy = PipelineConfig{};
  for (const auto& [k, v] : config_entries(c)) apply_override(copy, k, v);
  CHECK(config_entries(copy) == config_entries(c));
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("[corpus]\nnope = 1\n", ""), Error);
  CHECK_THROWS_AS(parse_config("seed = \"x\"\n", ""), Error);
  CHECK_THROWS_AS(parse_config("seed = -1\n", ""), Error);
  CHECK_THROWS_AS(parse_config("[graph\n", ""), Error);
  try {
    parse_config("[graph]\nprune = \"fancy\"\n", "");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Usage);
  }

  PipelineConfig c;
  CHECK_THROWS_AS(c.validate(), Error);
  c.corpus = "x";
  c.validate();
  c.pos_mode = PosMode::Nouns;
  CHECK_THROWS_AS(c.validate(), Error);
  c.pos_mode = PosMode::All;
  c.embedding_source = EmbeddingSource::Load;
  CHECK_THROWS_AS(c.validate(), Error);
  c.embedding_source = EmbeddingSource::Train;
  c.holdout_fraction = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c.holdout_fraction = 0.2;
  c.percentile = 120;
  CHECK_THROWS_AS(c.validate(), Error);
  c.percentile = 80;
  c.k_max = 0;
  CHECK_THROWS_AS(c.validate(), Error);

  CHECK_THROWS_AS(apply_override(c, "graph.bogus", "1"), Error);
  apply_override(c, "graph.percentile", "90");
  CHECK(c.percentile == 90);
  CHECK_THROWS_AS(apply_override(c, "graph.percentile", "ninety"), Error);
}

TEST_CASE("planted communities become the topics") {
  synth::TempDir dir("pipe");
  auto planted = synth::write_planted(dir.path(), 5);
  auto config = synth::planted_config(planted);
  auto report = run_pipeline(config);
  REQUIRE(report.results.size() == 1);
  const auto& r = report.results[0];
  CHECK(r.name == "K=1");
  REQUIRE(r.topics.size() == 3);
  std::set<NodeSet> got, want;
  for (const auto& t : r.topics) got.insert(t.members);
  for (auto c : planted.communities) {
    std::sort(c.begin(), c.end());
    want.insert(c);
  }
  CHECK(got == want);
  CHECK(r.valid);
  CHECK(report.time_p_seconds >= 0.0);
  for (const auto& t : r.topics) {
    CHECK(t.representatives.size() == 5);
    CHECK(t.ranking.size() == t.members.size());
  }
  REQUIRE(r.coherence.mean_cv_intrinsic);
  CHECK(*r.coherence.mean_cv_intrinsic > 0.5);
  CHECK(report.stats.vocabulary == 24);
  CHECK(report.hierarchy);
}

TEST_CASE("runs with equal seeds give identical reports") {
  synth::TempDir dir("det");
  auto planted = synth::write_planted(dir.path(), 9);
  auto config = synth::planted_config(planted);
  config.k_max = 3;
  config.representatives = RepresentativeMode::Degree;
  emit_report(run_pipeline(config), dir / "a", true);
  emit_report(run_pipeline(config), dir / "b", true);
  for (const char* f : {"topics.json", "hierarchy.json", "graph.tsv"}) {
    CHECK(synth::read_text(dir / "a" / f) == synth::read_text(dir / "b" / f));
  }
  for (const char* f : {"run.json", "coherence.csv"}) {
    CHECK(mask_timing(synth::read_text(dir / "a" / f)) == mask_timing(synth::read_text(dir / "b" / f)));
  }
}

TEST_CASE("report files") {
  synth::TempDir dir("emit");
  auto planted = synth::write_planted(dir.path(), 4);
  auto config = synth::planted_config(planted);
  config.min_topics_valid = 6;
  auto report = run_pipeline(config);
  CHECK_FALSE(report.results[0].valid);
  emit_report(report, dir / "out");
  emit_report(report, dir / "out");
  for (const char* f : {"topics.json", "coherence.csv", "run.json", "hierarchy.json"}) {
    CHECK(std::filesystem::exists(dir / "out" / f));
    CHECK_FALSE(std::filesystem::exists(dir / "out" / (std::string(f) + ".tmp")));
  }
  auto run = nlohmann::json::parse(synth::read_text(dir / "out" / "run.json"));
  CHECK(run["valid"] == false);
  CHECK(run["seed"] == config.seed);
  CHECK(run["config"]["graph.percentile"] == "80");
  CHECK(run["results"][0]["topic_count"] == 3);
  CHECK(run["time_p_seconds"].get<double>() >= 0.0);
  auto topics = nlohmann::json::parse(synth::read_text(dir / "out" / "topics.json"));
  REQUIRE(topics.size() == 3);
  CHECK(topics[0]["source"] == "kcomponent");
  CHECK(topics[0]["level"] == 1);

  const auto csv = synth::read_text(dir / "out" / "coherence.csv");
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "topic_id,source,umass,cv_in,cv_ex");
  CHECK(csv.find("mean:K=1,time_p=") != std::string::npos);

  auto back = load_report(dir / "out");
  CHECK(run_json(back) == run_json(report));
  auto loaded = load_topics(dir / "out" / "topics.json");
  REQUIRE(loaded.size() == 3);
  CHECK(loaded[0].members == report.results[0].topics[0].members);
}

TEST_CASE("no topics still gives a report") {
  synth::TempDir dir("empty");
  auto planted = synth::write_planted(dir.path(), 4);
  auto config = synth::planted_config(planted);
  config.min_topic_words = 50;
  config.k_max = 2;
  auto report = run_pipeline(config);
  REQUIRE(report.results.size() == 2);
  for (const auto& r : report.results) {
    CHECK(r.topic_count == 0);
    CHECK_FALSE(r.valid);
    CHECK(r.dropped > 0);
  }
  emit_report(report, dir / "out");
  auto run = nlohmann::json::parse(synth::read_text(dir / "out" / "run.json"));
  CHECK(run["valid"] == false);
}

TEST_CASE("pipeline errors carry the stage") {
  PipelineConfig c;
  c.corpus = "/nonexistent/corpus.txt";
  try {
    run_pipeline(c);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Data);
    CHECK(std::string(e.what()).rfind("load: ", 0) == 0);
  }

  synth::TempDir dir("stage");
  auto planted = synth::write_planted(dir.path(), 4);
  auto config = synth::planted_config(planted);
  config.min_count = 1000;
  try {
    run_pipeline(config);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("vocabulary: ", 0) == 0);
  }
}

TEST_CASE("gold mapping counts distinct labels") {
  auto report = gold_fixture_report();
  auto mapping = load_gold_mapping(kFixtures / "gold_six.tsv");
  auto eight = load_gold_mapping(kFixtures / "gold_eight.tsv");
  mapping.insert(mapping.end(), eight.begin(), eight.end());
  map_to_gold(report, mapping);
  CHECK(report.results[0].topic_count == 6);
  CHECK(report.results[0].gold_count == 6);
  CHECK(report.results[1].topic_count == 8);
  CHECK(report.results[1].gold_count == 7);
  CHECK(report.unmapped_topics.empty());
  CHECK(report.results[1].topics[1].label == "General Information");

  map_to_gold(report, {});
  CHECK(report.results[0].gold_count == 0);
  CHECK(report.unmapped_topics.size() == 14);
  CHECK_FALSE(report.results[0].topics[0].label);

  CHECK_THROWS_AS(map_to_gold(report, {{"K9-9", "Costs"}}), Error);
  std::istringstream dup("K1-0\tA\nK1-0\tB\n");
  CHECK_THROWS_AS(parse_gold_mapping(dup), Error);
  std::istringstream bad("K1-0 Costs\n");
  CHECK_THROWS_AS(parse_gold_mapping(bad), Error);
}

TEST_CASE("external baselines") {
  std::ifstream in(kFixtures / "external.csv");
  auto rows = parse_external_baselines(in);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].approach == "density");
  CHECK(rows[0].cv_in == 0.612);
  CHECK(rows[0].topics == 5u);
  CHECK_FALSE(rows[1].cv_in);
  CHECK(rows[1].topics == 3u);

  RunReport r = gold_fixture_report();
  r.external_baseline = rows;
  const auto table = summary_table(r);
  CHECK(table.find("density") != std::string::npos);
  CHECK(table.find("K-Means") != std::string::npos);

  std::istringstream bad("approach,color\nx,red\n");
  CHECK_THROWS_AS(parse_external_baselines(bad), Error);
  std::istringstream ragged("approach,cv_in\nx\n");
  CHECK_THROWS_AS(parse_external_baselines(ragged), Error);
}

TEST_CASE("k-means baseline and evaluation runs") {
  synth::TempDir dir("km");
  auto planted = synth::write_planted(dir.path(), 6);
  auto config = synth::planted_config(planted);
  config.baseline = KMeansConfig{};
  config.baseline->k = 3;
  auto km = run_kmeans_baseline(config);
  REQUIRE(km.results.size() == 1);
  CHECK(km.results[0].name == "k=3");
  CHECK(km.results[0].topic_count == 3);
  for (const auto& t : km.results[0].topics) CHECK(t.members.size() == 8);

  auto ev = evaluate_topics(config, km.results[0].topics);
  REQUIRE(ev.results.size() == 1);
  CHECK(ev.results[0].name == "external");
  CHECK(ev.results[0].coherence.mean_cv_intrinsic == km.results[0].coherence.mean_cv_intrinsic);
  CHECK_THROWS_AS(evaluate_topics(config, {}), Error);
}

TEST_CASE("trained embeddings feed the pipeline") {
  synth::TempDir dir("train");
  auto planted = synth::write_planted(dir.path(), 2);
  auto config = synth::planted_config(planted);
  config.embedding_source = EmbeddingSource::Train;
  config.skipgram.dim = 16;
  config.skipgram.epochs = 20;
  config.skipgram.window = 5;
  auto a = run_pipeline(config);
  auto b = run_pipeline(config);
  CHECK(topics_json(a) == topics_json(b));
  CHECK(a.stats.graph_nodes > 0);
}

TEST_CASE("hold-back corpus file") {
  synth::TempDir dir("hold");
  auto planted = synth::write_planted(dir.path(), 3);
  auto other = synth::write_planted(dir.path() / "..", 8);
  auto config = synth::planted_config(planted);
  config.holdout_corpus = other.corpus;
  auto corpora = prepare_corpora(config);
  CHECK(corpora.train.size() == 90);
  CHECK(corpora.holdout.size() == 90);
  std::filesystem::remove(other.corpus);
  std::filesystem::remove(other.embeddings);
}

TEST_CASE("shipped example config loads") {
  const auto path = kFixtures / ".." / ".." / "config" / "example.toml";
  auto c = load_config(path);
  c.validate();
  CHECK(c.corpus.filename() == "reviews.tsv");
  CHECK(c.corpus.is_absolute());
  CHECK(c.k_max == 3);
  REQUIRE(c.baseline);
  CHECK(c.baseline->k == 8);
}
