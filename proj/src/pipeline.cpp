#include "kcomp/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "kcomp/error.hpp"
#include "random.hpp"

namespace kcomp {

namespace {

constexpr std::uint64_t kHoldoutStream = 1;

template <class F>
auto stage(std::string_view name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(name) + ": " + e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    throw Error(ErrorKind::Data, std::string(name) + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorKind::Internal, std::string(name) + ": " + e.what());
  }
}

class CpuTimer {
 public:
  CpuTimer() : start_(std::clock()) {}
  double seconds() const {
    const std::clock_t now = std::clock();
    if (start_ == static_cast<std::clock_t>(-1) || now == static_cast<std::clock_t>(-1)) {
      return 0.0;
    }
    return std::max(0.0, static_cast<double>(now - start_) / CLOCKS_PER_SEC);
  }

 private:
  std::clock_t start_;
};

Corpus load_filtered(const std::filesystem::path& path, const PipelineConfig& config,
                     const PosMap* pos) {
  Corpus c = stage("load", [&] { return load_corpus(path, config.corpus_format); });
  return stage("filter", [&] { return filter_pos(c, pos, config.pos_mode); });
}

CoherenceOptions coherence_options(const PipelineConfig& config) {
  CoherenceOptions o;
  o.top_words = config.coherence_words;
  o.window = config.cv_window;
  return o;
}

// Scores and validates one result in place.
void finish_result(TopicSetResult& r, const PipelineConfig& config,
                   const PreparedCorpora& corpora, double time_p) {
  r.topic_count = r.topics.size();
  r.valid = r.topic_count >= config.min_topics_valid;
  if (!r.topics.empty()) {
    r.coherence = stage("coherence", [&] {
      return evaluate(r.topics, corpora.train, corpora.holdout, coherence_options(config));
    });
  }
  r.coherence.time_p_seconds = time_p;
}

RunReport new_report(std::string command, const PipelineConfig& config,
                     const PreparedCorpora& corpora) {
  RunReport report;
  report.command = std::move(command);
  report.config = config;
  report.seed = config.seed;
  report.stats.train_segments = corpora.train.size();
  report.stats.holdout_segments = corpora.holdout.size();
  report.stats.vocabulary = corpora.vocab.size();
  return report;
}

void apply_gold_map(RunReport& report, const PipelineConfig& config) {
  if (!config.gold_map) return;
  stage("gold", [&] { map_to_gold(report, load_gold_mapping(*config.gold_map)); });
}

std::string trim_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

PreparedCorpora prepare_corpora(const PipelineConfig& config) {
  config.validate();
  std::optional<PosMap> pos;
  if (config.pos_map) pos = stage("load", [&] { return load_pos_map(*config.pos_map); });
  const PosMap* pos_ptr = pos ? &*pos : nullptr;

  Corpus full = load_filtered(config.corpus, config, pos_ptr);
  Corpus train, holdout;
  if (config.holdout_corpus) {
    train = std::move(full);
    holdout = load_filtered(*config.holdout_corpus, config, pos_ptr);
    if (holdout.empty()) throw data_error("split: hold-back corpus has no segments");
  } else {
    auto parts = stage("split", [&] {
      return split_holdout(full, config.holdout_fraction,
                           detail::derive_seed(config.seed, kHoldoutStream));
    });
    train = std::move(parts.train);
    holdout = std::move(parts.holdout);
  }
  Vocabulary vocab = stage("vocabulary", [&] { return build_vocabulary(train, config.min_count); });
  return {std::move(train), std::move(holdout), std::move(vocab)};
}

EmbeddingStage obtain_embeddings(const PipelineConfig& config, const PreparedCorpora& corpora) {
  return stage("embed", [&]() -> EmbeddingStage {
    if (config.embedding_source == EmbeddingSource::Load) {
      auto loaded = load_embeddings(config.embeddings, config.embeddings_format);
      return {std::move(loaded.table), loaded.duplicates, loaded.zero_vectors};
    }
    SkipGramConfig sg = config.skipgram;
    sg.seed = config.seed;
    const Corpus stream = restrict_to(corpora.train, corpora.vocab);
    return {train_skipgram_hs(stream, corpora.vocab, sg), 0, 0};
  });
}

RunReport run_pipeline(const PipelineConfig& config) {
  const PreparedCorpora corpora = prepare_corpora(config);
  const EmbeddingStage emb = obtain_embeddings(config, corpora);
  RunReport report = new_report("extract", config, corpora);
  report.stats.embedding_duplicates = emb.duplicates;
  report.stats.embedding_zero_vectors = emb.zero_vectors;

  CompleteGraph complete = stage("graph", [&] {
    return build_complete_graph(corpora.vocab, emb.table, config.node_cap);
  });
  report.stats.missing_embeddings = complete.missing_embeddings;

  const CpuTimer timer;
  WordGraph pruned = stage("prune", [&] {
    return config.prune == PruneStrategy::Percentile
               ? prune_percentile(complete.graph, config.percentile)
               : prune_top_m(complete.graph, config.top_m);
  });
  ComponentHierarchy hierarchy =
      stage("hierarchy", [&] { return build_hierarchy(pruned, config.k_max); });

  for (std::size_t k = 1; k <= config.k_max; ++k) {
    TopicSetResult r;
    r.name = "K=" + std::to_string(k);
    r.method = TopicSource::KComponent;
    r.parameter = k;
    stage("topics", [&] {
      std::vector<NodeSet> sets;
      for (const auto& c : hierarchy.level(k)) sets.push_back(c.members);
      auto extraction = components_to_topics(sets, k, config.min_topic_words);
      for (auto& t : extraction.topics) {
        assign_representatives(t, config.representatives, &pruned, emb.table, config.top_n);
      }
      r.topics = std::move(extraction.topics);
      r.dropped = extraction.dropped;
    });
    report.results.push_back(std::move(r));
  }
  report.time_p_seconds = timer.seconds();

  for (auto& r : report.results) finish_result(r, config, corpora, report.time_p_seconds);
  report.stats.graph_nodes = pruned.node_count();
  report.stats.graph_edges = pruned.edge_count();
  report.hierarchy = std::move(hierarchy);
  report.pruned_graph = std::move(pruned);
  apply_gold_map(report, config);
  return report;
}

RunReport run_kmeans_baseline(const PipelineConfig& config) {
  const PreparedCorpora corpora = prepare_corpora(config);
  const EmbeddingStage emb = obtain_embeddings(config, corpora);
  RunReport report = new_report("baseline-kmeans", config, corpora);
  report.stats.embedding_duplicates = emb.duplicates;
  report.stats.embedding_zero_vectors = emb.zero_vectors;
  std::size_t embedded = 0;
  for (std::size_t i = 0; i < corpora.vocab.size(); ++i) {
    embedded += emb.table.contains(corpora.vocab.word(i));
  }
  report.stats.missing_embeddings = corpora.vocab.size() - embedded;

  KMeansConfig km = config.baseline.value_or(KMeansConfig{});
  km.seed = config.seed;
  km.min_words = config.min_topic_words;
  km.top_n = config.top_n;

  const CpuTimer timer;
  KMeansResult result = stage("kmeans", [&] { return kmeans_weighted(corpora.vocab, emb.table, km); });
  report.time_p_seconds = timer.seconds();

  TopicSetResult r;
  r.name = "k=" + std::to_string(km.k);
  r.method = TopicSource::KMeans;
  r.parameter = km.k;
  r.topics = std::move(result.topics.topics);
  r.dropped = result.topics.dropped;
  finish_result(r, config, corpora, report.time_p_seconds);
  report.results.push_back(std::move(r));
  apply_gold_map(report, config);
  return report;
}

RunReport evaluate_topics(const PipelineConfig& config, std::vector<Topic> topics) {
  if (topics.empty()) throw usage_error("evaluate: no topics to evaluate");
  const PreparedCorpora corpora = prepare_corpora(config);
  RunReport report = new_report("evaluate", config, corpora);
  TopicSetResult r;
  r.name = "external";
  r.method = TopicSource::External;
  r.topics = std::move(topics);
  finish_result(r, config, corpora, 0.0);
  report.results.push_back(std::move(r));
  apply_gold_map(report, config);
  return report;
}

GoldMapping parse_gold_mapping(std::istream& in) {
  GoldMapping out;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim_cr(std::move(line));
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      throw data_error("gold mapping line " + std::to_string(line_no) +
                       ": expected topic_id<TAB>gold_label");
    }
    std::string id = line.substr(0, tab);
    if (!seen.insert(id).second) {
      throw data_error("gold mapping line " + std::to_string(line_no) + ": topic '" + id +
                       "' mapped twice");
    }
    out.emplace_back(std::move(id), line.substr(tab + 1));
  }
  return out;
}

GoldMapping load_gold_mapping(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot read gold mapping " + path.string());
  try {
    return parse_gold_mapping(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void map_to_gold(RunReport& report, const GoldMapping& mapping) {
  std::map<std::string, Topic*, std::less<>> by_id;
  for (auto& r : report.results) {
    for (auto& t : r.topics) {
      t.label.reset();
      by_id[t.id] = &t;
    }
  }
  for (const auto& [id, label] : mapping) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw data_error("gold mapping references unknown topic '" + id + "'");
    it->second->label = label;
  }
  report.unmapped_topics.clear();
  for (auto& r : report.results) {
    std::set<std::string> labels;
    for (const auto& t : r.topics) {
      if (t.label) {
        labels.insert(*t.label);
      } else {
        report.unmapped_topics.push_back(t.id);
      }
    }
    r.gold_count = labels.size();
  }
}

std::vector<ExternalBaseline> parse_external_baselines(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    line = trim_cr(std::move(line));
    if (!line.empty()) header = split(line, ',');
  }
  if (header.empty()) return {};

  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  if (!col.count("approach")) throw data_error("external baseline CSV needs an 'approach' column");
  for (const auto& [name, _] : col) {
    static const std::set<std::string> known = {"approach", "hyperparameters", "cv_in", "cv_ex",
                                                "time_p", "topics", "gold"};
    if (!known.count(name)) throw data_error("external baseline CSV: unknown column '" + name + "'");
  }

  std::vector<ExternalBaseline> out;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim_cr(std::move(line));
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) {
      throw data_error("external baseline CSV line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " columns");
    }
    auto cell = [&](const char* name) -> const std::string* {
      auto it = col.find(name);
      if (it == col.end() || cells[it->second].empty()) return nullptr;
      return &cells[it->second];
    };
    auto real = [&](const char* name) -> std::optional<double> {
      const std::string* s = cell(name);
      if (!s) return std::nullopt;
      double v = 0;
      auto [end, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
      if (ec != std::errc() || end != s->data() + s->size()) {
        throw data_error("external baseline CSV line " + std::to_string(line_no) + ": bad " +
                         name + " '" + *s + "'");
      }
      return v;
    };
    auto count = [&](const char* name) -> std::optional<std::size_t> {
      const std::string* s = cell(name);
      if (!s) return std::nullopt;
      std::size_t v = 0;
      auto [end, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
      if (ec != std::errc() || end != s->data() + s->size()) {
        throw data_error("external baseline CSV line " + std::to_string(line_no) + ": bad " +
                         name + " '" + *s + "'");
      }
      return v;
    };
    ExternalBaseline b;
    if (const auto* s = cell("approach")) b.approach = *s;
    if (const auto* s = cell("hyperparameters")) b.hyperparameters = *s;
    b.cv_in = real("cv_in");
    b.cv_ex = real("cv_ex");
    b.time_p_seconds = real("time_p");
    b.topics = count("topics");
    b.gold = count("gold");
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace kcomp
