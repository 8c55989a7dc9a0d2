/*
 * kcomp C API.
 *
 * Topic extraction from word-embedding similarity graphs by maximal
 * K-edge-connected subgraphs, with a weighted k-means baseline and
 * u_mass / c_v coherence scoring.
 *
 * All objects are opaque handles created by a kc_*_create / kc_*_load call
 * and released with the matching kc_*_free. Every fallible function returns a
 * kc_status; on failure a description is available from kc_last_error() on
 * the calling thread until the next failing call on that thread.
 *
 * Handles are not synchronized. Distinct handles may be used from different
 * threads concurrently.
 */
#ifndef KCOMP_KCOMP_H
#define KCOMP_KCOMP_H

#include <stddef.h>
#include <stdint.h>

#if defined(KCOMP_BUILDING_LIBRARY)
#define KC_API __attribute__((visibility("default")))
#else
#define KC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Non-zero values match the CLI exit codes. */
typedef enum kc_status {
  KC_OK = 0,
  KC_ERR_USAGE = 1,    /* bad argument or configuration value */
  KC_ERR_DATA = 2,     /* unreadable, malformed or unsuitable input */
  KC_ERR_INTERNAL = 3  /* anything else */
} kc_status;

typedef struct kc_config kc_config;
typedef struct kc_report kc_report;
typedef struct kc_graph kc_graph;
typedef struct kc_hierarchy kc_hierarchy;

KC_API const char* kc_version(void);
KC_API const char* kc_last_error(void);

/* ---- configuration ---------------------------------------------------- */

/* Parses a TOML pipeline configuration file. */
KC_API kc_status kc_config_load(const char* path, kc_config** out);
/* Parses TOML text; relative paths resolve against base_dir (may be NULL). */
KC_API kc_status kc_config_parse(const char* toml_text, const char* base_dir,
                                 kc_config** out);
/* Empty configuration with defaults; the corpus must be set before use. */
KC_API kc_status kc_config_create(kc_config** out);
/* Overrides one key, e.g. ("seed", "7") or ("graph.percentile", "90"). */
KC_API kc_status kc_config_set(kc_config* config, const char* key,
                               const char* value);
KC_API void kc_config_free(kc_config* config);

/* ---- pipeline runs ---------------------------------------------------- */

/* Trains skip-gram embeddings on the configured corpus and writes them in
 * word2vec text (binary != 0: binary) format. */
KC_API kc_status kc_train_embeddings(const kc_config* config,
                                     const char* output_path, int binary,
                                     size_t* words_out);
KC_API kc_status kc_run_extract(const kc_config* config, kc_report** out);
KC_API kc_status kc_run_kmeans(const kc_config* config, kc_report** out);
/* Scores the topics of a topics.json file against the configured corpora. */
KC_API kc_status kc_run_evaluate(const kc_config* config,
                                 const char* topics_json_path,
                                 kc_report** out);

/* ---- reports ---------------------------------------------------------- */

KC_API kc_status kc_report_load(const char* run_dir, kc_report** out);
KC_API kc_status kc_report_map_gold(kc_report* report,
                                    const char* mapping_path);
/* Imports rows of an external-baseline CSV into the report. */
KC_API kc_status kc_report_import_external(kc_report* report,
                                           const char* csv_path);
/* Also writes the pruned graph edge list when include_graph != 0. */
KC_API kc_status kc_report_emit(const kc_report* report, const char* dir,
                                int include_graph);

KC_API size_t kc_report_result_count(const kc_report* report);
/* Per-result accessors return KC_ERR_USAGE for an out-of-range index. */
KC_API kc_status kc_report_result_name(const kc_report* report, size_t index,
                                       const char** name_out);
KC_API kc_status kc_report_topic_count(const kc_report* report, size_t index,
                                       size_t* out);
KC_API kc_status kc_report_gold_count(const kc_report* report, size_t index,
                                      size_t* out);
KC_API kc_status kc_report_valid(const kc_report* report, size_t index,
                                 int* out);
KC_API double kc_report_time_p(const kc_report* report);
/* NUL-terminated text owned by the report; valid until the next call of the
 * same function on that report or until it is freed. */
KC_API const char* kc_report_summary(kc_report* report);
KC_API const char* kc_report_run_json(kc_report* report);
KC_API void kc_report_free(kc_report* report);

/* ---- graphs ----------------------------------------------------------- */

KC_API kc_status kc_graph_create(kc_graph** out);
/* Adds both endpoints as needed. Self-loops and repeated pairs are errors. */
KC_API kc_status kc_graph_add_edge(kc_graph* graph, const char* a,
                                   const char* b, double weight);
KC_API kc_status kc_graph_add_node(kc_graph* graph, const char* word);
KC_API size_t kc_graph_node_count(const kc_graph* graph);
KC_API size_t kc_graph_edge_count(const kc_graph* graph);
KC_API kc_status kc_graph_prune_percentile(kc_graph* graph, double rank);
KC_API kc_status kc_graph_prune_top_m(kc_graph* graph, size_t m);
KC_API kc_status kc_graph_edge_connectivity(kc_graph* graph, uint64_t* out);
KC_API void kc_graph_free(kc_graph* graph);

KC_API kc_status kc_hierarchy_build(kc_graph* graph, size_t k_max,
                                    kc_hierarchy** out);
KC_API size_t kc_hierarchy_component_count(const kc_hierarchy* hierarchy,
                                           size_t level);
/* {"levels": {"1": [[...], ...], ...}}; owned by the hierarchy. */
KC_API const char* kc_hierarchy_json(const kc_hierarchy* hierarchy);
KC_API void kc_hierarchy_free(kc_hierarchy* hierarchy);

#ifdef __cplusplus
}
#endif

#endif /* KCOMP_KCOMP_H */
