#include "kcomp/kcomp.h"

#include <fstream>
#include <new>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "kcomp/error.hpp"
#include "kcomp/pipeline.hpp"

struct kc_config {
  kcomp::PipelineConfig value;
};

struct kc_report {
  kcomp::RunReport value;
  std::string summary;
  std::string run_json;
};

struct kc_graph {
  std::vector<std::string> nodes;
  std::vector<std::tuple<std::string, std::string, double>> edges;
  std::set<std::pair<std::string, std::string>> pairs;
  std::optional<kcomp::WordGraph> built;  // cache, reset on mutation
};

struct kc_hierarchy {
  kcomp::ComponentHierarchy value;
  std::string json;
};

namespace {

thread_local std::string last_error;

kc_status fail(kc_status status, const char* what) {
  last_error = what;
  return status;
}

template <class F>
kc_status guarded(F&& f) {
  try {
    f();
    return KC_OK;
  } catch (const kcomp::Error& e) {
    return fail(static_cast<kc_status>(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(KC_ERR_INTERNAL, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(KC_ERR_DATA, e.what());
  } catch (const std::exception& e) {
    return fail(KC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(KC_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw kcomp::usage_error(std::string(name) + " must not be NULL");
}

const kcomp::WordGraph& built(kc_graph* g) {
  if (!g->built) g->built = kcomp::WordGraph::from_named(g->nodes, g->edges);
  return *g->built;
}

// Replaces the pending node/edge lists with the contents of a graph.
void reset_from(kc_graph* g, kcomp::WordGraph value) {
  g->nodes = value.nodes();
  g->edges.clear();
  g->pairs.clear();
  for (const auto& e : value.edges()) {
    g->edges.emplace_back(value.node(e.u), value.node(e.v), e.weight);
    g->pairs.emplace(value.node(e.u), value.node(e.v));
  }
  g->built = std::move(value);
}

kc_status emit(kc_report** out, kcomp::RunReport report) {
  *out = new kc_report{std::move(report), {}, {}};
  return KC_OK;
}

template <class F>
kc_status with_result(const kc_report* report, size_t index, F&& f) {
  return guarded([&] {
    require(report, "report");
    if (index >= report->value.results.size()) {
      throw kcomp::usage_error("result index " + std::to_string(index) + " out of range");
    }
    f(report->value.results[index]);
  });
}

}  // namespace

extern "C" {

const char* kc_version(void) { return kcomp::version().data(); }

const char* kc_last_error(void) { return last_error.c_str(); }

kc_status kc_config_load(const char* path, kc_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new kc_config{kcomp::load_config(path)};
  });
}

kc_status kc_config_parse(const char* toml_text, const char* base_dir, kc_config** out) {
  return guarded([&] {
    require(toml_text, "toml_text");
    require(out, "out");
    *out = new kc_config{kcomp::parse_config(toml_text, base_dir ? base_dir : "")};
  });
}

kc_status kc_config_create(kc_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new kc_config{};
  });
}

kc_status kc_config_set(kc_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    kcomp::apply_override(config->value, key, value);
  });
}

void kc_config_free(kc_config* config) { delete config; }

kc_status kc_train_embeddings(const kc_config* config, const char* output_path, int binary,
                              size_t* words_out) {
  return guarded([&] {
    require(config, "config");
    require(output_path, "output_path");
    kcomp::PipelineConfig c = config->value;
    c.embedding_source = kcomp::EmbeddingSource::Train;
    const auto corpora = kcomp::prepare_corpora(c);
    const auto stage = kcomp::obtain_embeddings(c, corpora);
    kcomp::save_embeddings(output_path, stage.table,
                           binary ? kcomp::EmbeddingFormat::Word2VecBinary
                                  : kcomp::EmbeddingFormat::Word2VecText);
    if (words_out) *words_out = stage.table.size();
  });
}

kc_status kc_run_extract(const kc_config* config, kc_report** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    emit(out, kcomp::run_pipeline(config->value));
  });
}

kc_status kc_run_kmeans(const kc_config* config, kc_report** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    emit(out, kcomp::run_kmeans_baseline(config->value));
  });
}

kc_status kc_run_evaluate(const kc_config* config, const char* topics_json_path, kc_report** out) {
  return guarded([&] {
    require(config, "config");
    require(topics_json_path, "topics_json_path");
    require(out, "out");
    emit(out, kcomp::evaluate_topics(config->value, kcomp::load_topics(topics_json_path)));
  });
}

kc_status kc_report_load(const char* run_dir, kc_report** out) {
  return guarded([&] {
    require(run_dir, "run_dir");
    require(out, "out");
    emit(out, kcomp::load_report(run_dir));
  });
}

kc_status kc_report_map_gold(kc_report* report, const char* mapping_path) {
  return guarded([&] {
    require(report, "report");
    require(mapping_path, "mapping_path");
    kcomp::map_to_gold(report->value, kcomp::load_gold_mapping(mapping_path));
  });
}

kc_status kc_report_import_external(kc_report* report, const char* csv_path) {
  return guarded([&] {
    require(report, "report");
    require(csv_path, "csv_path");
    std::ifstream in(csv_path);
    if (!in) throw kcomp::data_error(std::string("cannot read ") + csv_path);
    auto rows = kcomp::parse_external_baselines(in);
    auto& dst = report->value.external_baseline;
    dst.insert(dst.end(), rows.begin(), rows.end());
  });
}

kc_status kc_report_emit(const kc_report* report, const char* dir, int include_graph) {
  return guarded([&] {
    require(report, "report");
    require(dir, "dir");
    kcomp::emit_report(report->value, dir, include_graph != 0);
  });
}

size_t kc_report_result_count(const kc_report* report) {
  return report ? report->value.results.size() : 0;
}

kc_status kc_report_result_name(const kc_report* report, size_t index, const char** name_out) {
  return with_result(report, index, [&](const kcomp::TopicSetResult& r) {
    require(name_out, "name_out");
    *name_out = r.name.c_str();
  });
}

kc_status kc_report_topic_count(const kc_report* report, size_t index, size_t* out) {
  return with_result(report, index, [&](const kcomp::TopicSetResult& r) {
    require(out, "out");
    *out = r.topic_count;
  });
}

kc_status kc_report_gold_count(const kc_report* report, size_t index, size_t* out) {
  return with_result(report, index, [&](const kcomp::TopicSetResult& r) {
    require(out, "out");
    *out = r.gold_count;
  });
}

kc_status kc_report_valid(const kc_report* report, size_t index, int* out) {
  return with_result(report, index, [&](const kcomp::TopicSetResult& r) {
    require(out, "out");
    *out = r.valid ? 1 : 0;
  });
}

double kc_report_time_p(const kc_report* report) {
  return report ? report->value.time_p_seconds : 0.0;
}

const char* kc_report_summary(kc_report* report) {
  if (!report) return "";
  report->summary = kcomp::summary_table(report->value);
  return report->summary.c_str();
}

const char* kc_report_run_json(kc_report* report) {
  if (!report) return "";
  report->run_json = kcomp::run_json(report->value);
  return report->run_json.c_str();
}

void kc_report_free(kc_report* report) { delete report; }

kc_status kc_graph_create(kc_graph** out) {
  return guarded([&] {
    require(out, "out");
    *out = new kc_graph{};
  });
}

kc_status kc_graph_add_edge(kc_graph* graph, const char* a, const char* b, double weight) {
  return guarded([&] {
    require(graph, "graph");
    require(a, "a");
    require(b, "b");
    std::string x(a), y(b);
    if (x.empty() || y.empty()) throw kcomp::usage_error("empty node name");
    if (x == y) throw kcomp::usage_error("self-loop on '" + x + "'");
    if (y < x) std::swap(x, y);
    if (!graph->pairs.emplace(x, y).second) {
      throw kcomp::usage_error("repeated edge " + x + "-" + y);
    }
    graph->edges.emplace_back(std::move(x), std::move(y), weight);
    graph->built.reset();
  });
}

kc_status kc_graph_add_node(kc_graph* graph, const char* word) {
  return guarded([&] {
    require(graph, "graph");
    require(word, "word");
    if (*word == '\0') throw kcomp::usage_error("empty node name");
    graph->nodes.emplace_back(word);
    graph->built.reset();
  });
}

size_t kc_graph_node_count(const kc_graph* graph) {
  if (!graph) return 0;
  auto* g = const_cast<kc_graph*>(graph);
  try {
    return built(g).node_count();
  } catch (...) {
    return 0;
  }
}

size_t kc_graph_edge_count(const kc_graph* graph) { return graph ? graph->edges.size() : 0; }

kc_status kc_graph_prune_percentile(kc_graph* graph, double rank) {
  return guarded([&] {
    require(graph, "graph");
    reset_from(graph, kcomp::prune_percentile(built(graph), rank));
  });
}

kc_status kc_graph_prune_top_m(kc_graph* graph, size_t m) {
  return guarded([&] {
    require(graph, "graph");
    reset_from(graph, kcomp::prune_top_m(built(graph), m));
  });
}

kc_status kc_graph_edge_connectivity(kc_graph* graph, uint64_t* out) {
  return guarded([&] {
    require(graph, "graph");
    require(out, "out");
    *out = kcomp::edge_connectivity(built(graph));
  });
}

void kc_graph_free(kc_graph* graph) { delete graph; }

kc_status kc_hierarchy_build(kc_graph* graph, size_t k_max, kc_hierarchy** out) {
  return guarded([&] {
    require(graph, "graph");
    require(out, "out");
    auto h = kcomp::build_hierarchy(built(graph), k_max);
    auto json = h.to_json();
    *out = new kc_hierarchy{std::move(h), std::move(json)};
  });
}

size_t kc_hierarchy_component_count(const kc_hierarchy* hierarchy, size_t level) {
  if (!hierarchy || level < 1 || level > hierarchy->value.k_max()) return 0;
  return hierarchy->value.level(level).size();
}

const char* kc_hierarchy_json(const kc_hierarchy* hierarchy) {
  return hierarchy ? hierarchy->json.c_str() : "";
}

void kc_hierarchy_free(kc_hierarchy* hierarchy) { delete hierarchy; }

}  // extern "C"
