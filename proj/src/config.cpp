#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "kcomp/error.hpp"
#include "kcomp/pipeline.hpp"

namespace kcomp {

namespace {

struct Setting {
  std::string_view text;
  const std::filesystem::path& base_dir;
  std::string_view key;

  [[noreturn]] void fail(std::string_view expected) const {
    throw usage_error("config key '" + std::string(key) + "': expected " +
                      std::string(expected) + ", got '" + std::string(text) + "'");
  }

  std::string str() const { return std::string(text); }

  std::filesystem::path path() const {
    std::filesystem::path p(text);
    if (p.empty() || p.is_absolute() || base_dir.empty()) return p;
    return base_dir / p;
  }

  std::optional<std::filesystem::path> optional_path() const {
    if (text.empty()) return std::nullopt;
    return path();
  }

  std::uint64_t uint() const {
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size()) fail("a non-negative integer");
    return v;
  }

  std::size_t size() const { return static_cast<std::size_t>(uint()); }

  double real() const {
    double v = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size()) fail("a number");
    return v;
  }

  bool boolean() const {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    fail("true or false");
  }
};

using Setter = std::function<void(PipelineConfig&, const Setting&)>;

KMeansConfig& baseline(PipelineConfig& c) {
  if (!c.baseline) c.baseline.emplace();
  return *c.baseline;
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"seed", [](PipelineConfig& c, const Setting& s) { c.seed = s.uint(); }},
      {"corpus.path", [](PipelineConfig& c, const Setting& s) { c.corpus = s.path(); }},
      {"corpus.format",
       [](PipelineConfig& c, const Setting& s) { c.corpus_format = parse_corpus_format(s.text); }},
      {"corpus.holdout",
       [](PipelineConfig& c, const Setting& s) { c.holdout_corpus = s.optional_path(); }},
      {"corpus.holdout_fraction",
       [](PipelineConfig& c, const Setting& s) { c.holdout_fraction = s.real(); }},
      {"corpus.pos_map", [](PipelineConfig& c, const Setting& s) { c.pos_map = s.optional_path(); }},
      {"corpus.pos_mode",
       [](PipelineConfig& c, const Setting& s) { c.pos_mode = parse_pos_mode(s.text); }},
      {"corpus.gold_map",
       [](PipelineConfig& c, const Setting& s) { c.gold_map = s.optional_path(); }},
      {"corpus.min_count", [](PipelineConfig& c, const Setting& s) { c.min_count = s.size(); }},
      {"embeddings.source",
       [](PipelineConfig& c, const Setting& s) {
         if (s.text == "load") {
           c.embedding_source = EmbeddingSource::Load;
         } else if (s.text == "train") {
           c.embedding_source = EmbeddingSource::Train;
         } else {
           s.fail("load or train");
         }
       }},
      {"embeddings.path", [](PipelineConfig& c, const Setting& s) { c.embeddings = s.path(); }},
      {"embeddings.format",
       [](PipelineConfig& c, const Setting& s) {
         c.embeddings_format = parse_embedding_format(s.text);
       }},
      {"embeddings.window",
       [](PipelineConfig& c, const Setting& s) { c.skipgram.window = s.size(); }},
      {"embeddings.epochs",
       [](PipelineConfig& c, const Setting& s) { c.skipgram.epochs = s.size(); }},
      {"embeddings.dim", [](PipelineConfig& c, const Setting& s) { c.skipgram.dim = s.size(); }},
      {"embeddings.initial_lr",
       [](PipelineConfig& c, const Setting& s) { c.skipgram.initial_lr = s.real(); }},
      {"graph.prune",
       [](PipelineConfig& c, const Setting& s) {
         if (s.text == "percentile") {
           c.prune = PruneStrategy::Percentile;
         } else if (s.text == "top_m") {
           c.prune = PruneStrategy::TopM;
         } else {
           s.fail("percentile or top_m");
         }
       }},
      {"graph.percentile", [](PipelineConfig& c, const Setting& s) { c.percentile = s.real(); }},
      {"graph.top_m", [](PipelineConfig& c, const Setting& s) { c.top_m = s.size(); }},
      {"graph.node_cap", [](PipelineConfig& c, const Setting& s) { c.node_cap = s.size(); }},
      {"kcomponents.k_max", [](PipelineConfig& c, const Setting& s) { c.k_max = s.size(); }},
      {"topics.representatives",
       [](PipelineConfig& c, const Setting& s) {
         c.representatives = parse_representative_mode(s.text);
       }},
      {"topics.top_n", [](PipelineConfig& c, const Setting& s) { c.top_n = s.size(); }},
      {"topics.min_topic_words",
       [](PipelineConfig& c, const Setting& s) { c.min_topic_words = s.size(); }},
      {"topics.min_topics_valid",
       [](PipelineConfig& c, const Setting& s) { c.min_topics_valid = s.size(); }},
      {"coherence.top_words",
       [](PipelineConfig& c, const Setting& s) { c.coherence_words = s.size(); }},
      {"coherence.window", [](PipelineConfig& c, const Setting& s) { c.cv_window = s.size(); }},
      {"baseline.k", [](PipelineConfig& c, const Setting& s) { baseline(c).k = s.size(); }},
      {"baseline.weighting",
       [](PipelineConfig& c, const Setting& s) { baseline(c).weighting = parse_weighting(s.text); }},
      {"baseline.max_iter",
       [](PipelineConfig& c, const Setting& s) { baseline(c).max_iter = s.size(); }},
      {"baseline.restarts",
       [](PipelineConfig& c, const Setting& s) { baseline(c).restarts = s.size(); }},
      {"baseline.enforce_min_words",
       [](PipelineConfig& c, const Setting& s) { baseline(c).enforce_min_words = s.boolean(); }},
  };
  return table;
}

void apply(PipelineConfig& config, std::string_view key, std::string_view value,
           const std::filesystem::path& base_dir) {
  const auto& table = setters();
  auto it = table.find(key);
  if (it == table.end()) throw usage_error("unknown config key '" + std::string(key) + "'");
  it->second(config, Setting{value, base_dir, key});
}

std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string scalar_text(const toml::node& node, const std::string& key) {
  if (auto s = node.as_string()) return s->get();
  if (auto i = node.as_integer()) {
    if (i->get() < 0) throw usage_error("config key '" + key + "' must not be negative");
    return std::to_string(i->get());
  }
  if (auto f = node.as_floating_point()) return format_real(f->get());
  if (auto b = node.as_boolean()) return b->get() ? "true" : "false";
  throw usage_error("config key '" + key + "' must be a string, number or boolean");
}

void walk(PipelineConfig& config, const toml::table& table, const std::string& prefix,
          const std::filesystem::path& base_dir) {
  for (const auto& [k, node] : table) {
    const std::string key = prefix.empty() ? std::string(k.str()) : prefix + "." + std::string(k.str());
    if (const auto* sub = node.as_table()) {
      if (!prefix.empty()) throw usage_error("config nesting too deep at '" + key + "'");
      if (key == "baseline") baseline(config);
      walk(config, *sub, key, base_dir);
    } else {
      apply(config, key, scalar_text(node, key), base_dir);
    }
  }
}

}  // namespace

void PipelineConfig::validate() const {
  if (corpus.empty()) throw usage_error("corpus.path is required");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw usage_error("corpus.holdout_fraction must be in (0, 1)");
  }
  if (min_count < 1) throw usage_error("corpus.min_count must be >= 1");
  if (pos_mode == PosMode::Nouns && !pos_map) {
    throw usage_error("corpus.pos_mode = \"nouns\" requires corpus.pos_map");
  }
  if (embedding_source == EmbeddingSource::Load && embeddings.empty()) {
    throw usage_error("embeddings.source = \"load\" requires embeddings.path");
  }
  if (embedding_source == EmbeddingSource::Train) skipgram.validate();
  if (prune == PruneStrategy::Percentile && !(percentile >= 0.0 && percentile <= 100.0)) {
    throw usage_error("graph.percentile must be in [0, 100]");
  }
  if (prune == PruneStrategy::TopM && top_m < 1) throw usage_error("graph.top_m must be >= 1");
  if (node_cap < 2) throw usage_error("graph.node_cap must be >= 2");
  if (k_max < 1) throw usage_error("kcomponents.k_max must be >= 1");
  if (top_n < 1) throw usage_error("topics.top_n must be >= 1");
  if (min_topic_words < 1) throw usage_error("topics.min_topic_words must be >= 1");
  if (min_topics_valid < 1) throw usage_error("topics.min_topics_valid must be >= 1");
  if (coherence_words < 2) throw usage_error("coherence.top_words must be >= 2");
  if (cv_window < 1) throw usage_error("coherence.window must be >= 1");
  if (baseline) baseline->validate();
}

PipelineConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir) {
  toml::table doc;
  try {
    doc = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config parse error at line " << e.source().begin.line << ": " << e.description();
    throw usage_error(msg.str());
  }
  PipelineConfig config;
  walk(config, doc, "", base_dir);
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw usage_error("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str(), path.parent_path());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void apply_override(PipelineConfig& config, std::string_view key, std::string_view value) {
  apply(config, key, value, {});
}

std::vector<std::pair<std::string, std::string>> config_entries(const PipelineConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  auto add = [&](std::string key, std::string value) {
    out.emplace_back(std::move(key), std::move(value));
  };
  auto opt = [](const std::optional<std::filesystem::path>& p) {
    return p ? p->string() : std::string();
  };
  add("seed", std::to_string(c.seed));
  add("corpus.path", c.corpus.string());
  add("corpus.format", std::string(to_string(c.corpus_format)));
  add("corpus.holdout", opt(c.holdout_corpus));
  add("corpus.holdout_fraction", format_real(c.holdout_fraction));
  add("corpus.pos_map", opt(c.pos_map));
  add("corpus.pos_mode", std::string(to_string(c.pos_mode)));
  add("corpus.gold_map", opt(c.gold_map));
  add("corpus.min_count", std::to_string(c.min_count));
  add("embeddings.source", c.embedding_source == EmbeddingSource::Load ? "load" : "train");
  add("embeddings.path", c.embeddings.string());
  add("embeddings.format", c.embeddings_format == EmbeddingFormat::Word2VecText
                               ? "word2vec-text"
                               : "word2vec-binary");
  add("embeddings.window", std::to_string(c.skipgram.window));
  add("embeddings.epochs", std::to_string(c.skipgram.epochs));
  add("embeddings.dim", std::to_string(c.skipgram.dim));
  add("embeddings.initial_lr", format_real(c.skipgram.initial_lr));
  add("graph.prune", c.prune == PruneStrategy::Percentile ? "percentile" : "top_m");
  add("graph.percentile", format_real(c.percentile));
  add("graph.top_m", std::to_string(c.top_m));
  add("graph.node_cap", std::to_string(c.node_cap));
  add("kcomponents.k_max", std::to_string(c.k_max));
  add("topics.representatives", std::string(to_string(c.representatives)));
  add("topics.top_n", std::to_string(c.top_n));
  add("topics.min_topic_words", std::to_string(c.min_topic_words));
  add("topics.min_topics_valid", std::to_string(c.min_topics_valid));
  add("coherence.top_words", std::to_string(c.coherence_words));
  add("coherence.window", std::to_string(c.cv_window));
  if (c.baseline) {
    add("baseline.k", std::to_string(c.baseline->k));
    add("baseline.weighting", std::string(to_string(c.baseline->weighting)));
    add("baseline.max_iter", std::to_string(c.baseline->max_iter));
    add("baseline.restarts", std::to_string(c.baseline->restarts));
    add("baseline.enforce_min_words", c.baseline->enforce_min_words ? "true" : "false");
  }
  return out;
}

}  // namespace kcomp
