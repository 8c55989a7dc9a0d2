#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kcomp/error.hpp"
#include "kcomp/pipeline.hpp"

namespace kcomp {

using nlohmann::ordered_json;

namespace {

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> read_optional(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

ordered_json topic_json(const Topic& t) {
  ordered_json j;
  j["id"] = t.id;
  j["source"] = std::string(to_string(t.source));
  if (t.source == TopicSource::KComponent) j["level"] = t.level;
  if (t.source == TopicSource::KMeans) j["cluster_id"] = t.cluster_id;
  j["representatives"] = t.representatives;
  j["members"] = t.members;
  j["ranking"] = t.ranking;
  if (t.label) j["label"] = *t.label;
  return j;
}

Topic topic_from_json(const ordered_json& j, std::size_t position) {
  if (!j.is_object()) throw data_error("topic " + std::to_string(position) + " is not an object");
  Topic t;
  t.id = j.value("id", "T" + std::to_string(position));
  t.source = j.contains("source") ? parse_topic_source(j.at("source").get<std::string>())
                                  : TopicSource::External;
  t.level = j.value("level", std::size_t{0});
  t.cluster_id = j.value("cluster_id", std::size_t{0});
  if (!j.contains("members")) throw data_error("topic '" + t.id + "' has no members");
  t.members = j.at("members").get<NodeSet>();
  std::sort(t.members.begin(), t.members.end());
  if (std::adjacent_find(t.members.begin(), t.members.end()) != t.members.end()) {
    throw data_error("topic '" + t.id + "' lists a member twice");
  }
  t.ranking = j.value("ranking", std::vector<std::string>{});
  t.representatives = j.value("representatives", std::vector<std::string>{});
  if (j.contains("label") && !j.at("label").is_null()) t.label = j.at("label").get<std::string>();
  return t;
}

ordered_json coherence_json(const CoherenceReport& c) {
  ordered_json j;
  j["mean_umass"] = optional_number(c.mean_umass);
  j["mean_cv_intrinsic"] = optional_number(c.mean_cv_intrinsic);
  j["mean_cv_extrinsic"] = optional_number(c.mean_cv_extrinsic);
  j["undefined_umass"] = c.undefined_umass;
  j["undefined_cv_in"] = c.undefined_cv_in;
  j["undefined_cv_ex"] = c.undefined_cv_ex;
  j["clamped"] = c.clamped;
  j["time_p_seconds"] = c.time_p_seconds;
  auto per = ordered_json::array();
  for (const auto& s : c.per_topic) {
    ordered_json row;
    row["topic_id"] = s.topic_id;
    row["source"] = std::string(to_string(s.source));
    row["umass"] = optional_number(s.umass);
    row["cv_in"] = optional_number(s.cv_in);
    row["cv_ex"] = optional_number(s.cv_ex);
    per.push_back(std::move(row));
  }
  j["per_topic"] = std::move(per);
  return j;
}

CoherenceReport coherence_from_json(const ordered_json& j) {
  CoherenceReport c;
  c.mean_umass = read_optional(j, "mean_umass");
  c.mean_cv_intrinsic = read_optional(j, "mean_cv_intrinsic");
  c.mean_cv_extrinsic = read_optional(j, "mean_cv_extrinsic");
  c.undefined_umass = j.value("undefined_umass", std::size_t{0});
  c.undefined_cv_in = j.value("undefined_cv_in", std::size_t{0});
  c.undefined_cv_ex = j.value("undefined_cv_ex", std::size_t{0});
  c.clamped = j.value("clamped", std::size_t{0});
  c.time_p_seconds = j.value("time_p_seconds", 0.0);
  for (const auto& row : j.value("per_topic", ordered_json::array())) {
    TopicScores s;
    s.topic_id = row.at("topic_id").get<std::string>();
    s.source = parse_topic_source(row.at("source").get<std::string>());
    s.umass = read_optional(row, "umass");
    s.cv_in = read_optional(row, "cv_in");
    s.cv_ex = read_optional(row, "cv_ex");
    c.per_topic.push_back(std::move(s));
  }
  return c;
}

template <class T>
ordered_json optional_value(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

bool report_valid(const RunReport& r) {
  return std::all_of(r.results.begin(), r.results.end(),
                     [](const TopicSetResult& x) { return x.valid; });
}

std::string fixed(const std::optional<double>& v, int digits) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, *v);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ordered_json parse_json(const std::filesystem::path& path) {
  try {
    return ordered_json::parse(read_file(path));
  } catch (const ordered_json::exception& e) {
    throw data_error(path.string() + ": " + e.what());
  }
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw data_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw data_error("cannot replace " + path.string());
  }
}

const char* approach_name(TopicSource method) {
  switch (method) {
    case TopicSource::KComponent: return "K-Components";
    case TopicSource::KMeans: return "K-Means";
    case TopicSource::External: return "external";
  }
  return "";
}

}  // namespace

std::string_view version() noexcept { return KCOMP_VERSION; }

std::string topics_json(const RunReport& report) {
  auto arr = ordered_json::array();
  for (const auto& r : report.results) {
    for (const auto& t : r.topics) arr.push_back(topic_json(t));
  }
  return arr.dump(2) + "\n";
}

std::string run_json(const RunReport& report) {
  ordered_json doc;
  doc["command"] = report.command;
  doc["version"] = std::string(version());
  doc["seed"] = report.seed;
  doc["valid"] = report_valid(report);
  doc["time_p_seconds"] = report.time_p_seconds;

  ordered_json config = ordered_json::object();
  for (const auto& [k, v] : config_entries(report.config)) config[k] = v;
  doc["config"] = std::move(config);

  const auto& s = report.stats;
  doc["stats"] = {{"train_segments", s.train_segments},
                  {"holdout_segments", s.holdout_segments},
                  {"vocabulary", s.vocabulary},
                  {"missing_embeddings", s.missing_embeddings},
                  {"embedding_duplicates", s.embedding_duplicates},
                  {"embedding_zero_vectors", s.embedding_zero_vectors},
                  {"graph_nodes", s.graph_nodes},
                  {"graph_edges", s.graph_edges}};

  auto results = ordered_json::array();
  for (const auto& r : report.results) {
    ordered_json j;
    j["name"] = r.name;
    j["method"] = std::string(to_string(r.method));
    j["parameter"] = r.parameter;
    j["topic_count"] = r.topic_count;
    j["gold_count"] = r.gold_count;
    j["valid"] = r.valid;
    j["dropped"] = r.dropped;
    j["coherence"] = coherence_json(r.coherence);
    auto topics = ordered_json::array();
    for (const auto& t : r.topics) topics.push_back(topic_json(t));
    j["topics"] = std::move(topics);
    results.push_back(std::move(j));
  }
  doc["results"] = std::move(results);

  auto external = ordered_json::array();
  for (const auto& b : report.external_baseline) {
    ordered_json j;
    j["approach"] = b.approach;
    j["hyperparameters"] = b.hyperparameters;
    j["cv_in"] = optional_value(b.cv_in);
    j["cv_ex"] = optional_value(b.cv_ex);
    j["time_p_seconds"] = optional_value(b.time_p_seconds);
    j["topics"] = optional_value(b.topics);
    j["gold"] = optional_value(b.gold);
    external.push_back(std::move(j));
  }
  doc["external_baseline"] = std::move(external);
  doc["unmapped_topics"] = report.unmapped_topics;
  return doc.dump(2) + "\n";
}

std::string coherence_csv(const RunReport& report) {
  std::ostringstream out;
  out << "topic_id,source,umass,cv_in,cv_ex\n";
  for (const auto& r : report.results) {
    for (const auto& s : r.coherence.per_topic) {
      out << s.topic_id << ',' << to_string(s.source) << ',' << fixed(s.umass, 9) << ','
          << fixed(s.cv_in, 9) << ',' << fixed(s.cv_ex, 9) << '\n';
    }
  }
  for (const auto& r : report.results) {
    out << "mean:" << r.name << ",time_p=" << fixed(r.coherence.time_p_seconds, 6) << ','
        << fixed(r.coherence.mean_umass, 9) << ',' << fixed(r.coherence.mean_cv_intrinsic, 9)
        << ',' << fixed(r.coherence.mean_cv_extrinsic, 9) << '\n';
  }
  return out.str();
}

std::string summary_table(const RunReport& report) {
  struct Row {
    std::string approach, params, cv_in, cv_ex, time_p, topics, gold, valid;
  };
  std::vector<Row> rows = {{"Approach", "Hyperparameters", "cv_in", "cv_ex", "time_P", "#Topics",
                            "#Gold", "valid"}};
  for (const auto& r : report.results) {
    rows.push_back({approach_name(r.method), r.name, fixed(r.coherence.mean_cv_intrinsic, 3),
                    fixed(r.coherence.mean_cv_extrinsic, 3), fixed(r.coherence.time_p_seconds, 3),
                    std::to_string(r.topic_count), std::to_string(r.gold_count),
                    r.valid ? "yes" : "no"});
  }
  for (const auto& b : report.external_baseline) {
    rows.push_back({b.approach, b.hyperparameters, fixed(b.cv_in, 3), fixed(b.cv_ex, 3),
                    fixed(b.time_p_seconds, 3), b.topics ? std::to_string(*b.topics) : "",
                    b.gold ? std::to_string(*b.gold) : "", ""});
  }
  std::vector<std::size_t> width(8, 0);
  auto cells = [](const Row& r) {
    return std::vector<const std::string*>{&r.approach, &r.params, &r.cv_in, &r.cv_ex,
                                           &r.time_p,   &r.topics, &r.gold,  &r.valid};
  };
  for (const auto& r : rows) {
    auto c = cells(r);
    for (std::size_t i = 0; i < c.size(); ++i) width[i] = std::max(width[i], c[i]->size());
  }
  std::ostringstream out;
  for (const auto& r : rows) {
    auto c = cells(r);
    std::string line;
    for (std::size_t i = 0; i < c.size(); ++i) {
      line += *c[i];
      if (i + 1 < c.size()) line += std::string(width[i] - c[i]->size() + 2, ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
  return out.str();
}

void emit_report(const RunReport& report, const std::filesystem::path& dir, bool include_graph) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw data_error("cannot create " + dir.string() + ": " + ec.message());
  write_atomic(dir / "topics.json", topics_json(report));
  write_atomic(dir / "coherence.csv", coherence_csv(report));
  write_atomic(dir / "run.json", run_json(report));
  if (report.hierarchy) write_atomic(dir / "hierarchy.json", report.hierarchy->to_json());
  if (include_graph && report.pruned_graph) {
    std::ostringstream tsv;
    write_edge_list(tsv, *report.pruned_graph);
    write_atomic(dir / "graph.tsv", tsv.str());
  }
}

RunReport load_report(const std::filesystem::path& run_dir) {
  const auto path = run_dir / "run.json";
  const ordered_json doc = parse_json(path);
  try {
    RunReport report;
    report.command = doc.at("command").get<std::string>();
    report.seed = doc.at("seed").get<std::uint64_t>();
    report.time_p_seconds = doc.at("time_p_seconds").get<double>();
    for (const auto& [k, v] : doc.at("config").items()) {
      apply_override(report.config, k, v.get<std::string>());
    }
    const auto& s = doc.at("stats");
    report.stats.train_segments = s.value("train_segments", std::size_t{0});
    report.stats.holdout_segments = s.value("holdout_segments", std::size_t{0});
    report.stats.vocabulary = s.value("vocabulary", std::size_t{0});
    report.stats.missing_embeddings = s.value("missing_embeddings", std::size_t{0});
    report.stats.embedding_duplicates = s.value("embedding_duplicates", std::size_t{0});
    report.stats.embedding_zero_vectors = s.value("embedding_zero_vectors", std::size_t{0});
    report.stats.graph_nodes = s.value("graph_nodes", std::size_t{0});
    report.stats.graph_edges = s.value("graph_edges", std::size_t{0});
    for (const auto& j : doc.at("results")) {
      TopicSetResult r;
      r.name = j.at("name").get<std::string>();
      r.method = parse_topic_source(j.at("method").get<std::string>());
      r.parameter = j.at("parameter").get<std::size_t>();
      r.topic_count = j.at("topic_count").get<std::size_t>();
      r.gold_count = j.at("gold_count").get<std::size_t>();
      r.valid = j.at("valid").get<bool>();
      r.dropped = j.value("dropped", std::size_t{0});
      r.coherence = coherence_from_json(j.at("coherence"));
      std::size_t i = 0;
      for (const auto& t : j.at("topics")) r.topics.push_back(topic_from_json(t, i++));
      report.results.push_back(std::move(r));
    }
    for (const auto& j : doc.value("external_baseline", ordered_json::array())) {
      ExternalBaseline b;
      b.approach = j.value("approach", "");
      b.hyperparameters = j.value("hyperparameters", "");
      b.cv_in = read_optional(j, "cv_in");
      b.cv_ex = read_optional(j, "cv_ex");
      b.time_p_seconds = read_optional(j, "time_p_seconds");
      if (j.contains("topics") && !j["topics"].is_null()) b.topics = j["topics"].get<std::size_t>();
      if (j.contains("gold") && !j["gold"].is_null()) b.gold = j["gold"].get<std::size_t>();
      report.external_baseline.push_back(std::move(b));
    }
    report.unmapped_topics = doc.value("unmapped_topics", std::vector<std::string>{});
    return report;
  } catch (const ordered_json::exception& e) {
    throw data_error(path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(ErrorKind::Data, path.string() + ": " + e.what());
  }
}

std::vector<Topic> load_topics(const std::filesystem::path& path) {
  const ordered_json doc = parse_json(path);
  if (!doc.is_array()) throw data_error(path.string() + ": expected a JSON array of topics");
  std::vector<Topic> topics;
  try {
    std::size_t i = 0;
    for (const auto& j : doc) topics.push_back(topic_from_json(j, i++));
  } catch (const ordered_json::exception& e) {
    throw data_error(path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
  std::set<std::string> ids;
  for (const auto& t : topics) {
    if (!ids.insert(t.id).second) throw data_error(path.string() + ": duplicate topic id '" + t.id + "'");
  }
  return topics;
}

}  // namespace kcomp
