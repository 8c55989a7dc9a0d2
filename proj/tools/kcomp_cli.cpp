// kcomp command-line front end. Talks to the library through the C API only.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kcomp/kcomp.h"

namespace {

struct Failure {
  kc_status status;
};

void check(kc_status status) {
  if (status != KC_OK) {
    std::fprintf(stderr, "kcomp: %s\n", kc_last_error());
    throw Failure{status};
  }
}

struct ConfigHandle {
  kc_config* ptr = nullptr;
  ~ConfigHandle() { kc_config_free(ptr); }
};

struct ReportHandle {
  kc_report* ptr = nullptr;
  ~ReportHandle() { kc_report_free(ptr); }
};

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool need_config) {
  auto* c = cmd->add_option("--config", opts.config, "TOML pipeline configuration");
  if (need_config) c->required();
  c->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "override the configured seed");
  cmd->add_option("--set", opts.overrides, "override a config key (key=value), repeatable");
  cmd->add_option("--out", opts.out, "output directory")->required();
}

void open_config(const CommonOptions& opts, ConfigHandle& cfg) {
  if (opts.config.empty()) {
    check(kc_config_create(&cfg.ptr));
  } else {
    check(kc_config_load(opts.config.c_str(), &cfg.ptr));
  }
  for (const auto& kv : opts.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr, "kcomp: --set expects key=value, got '%s'\n", kv.c_str());
      throw Failure{KC_ERR_USAGE};
    }
    check(kc_config_set(cfg.ptr, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
  }
  if (opts.seed) check(kc_config_set(cfg.ptr, "seed", std::to_string(*opts.seed).c_str()));
}

void finish(ReportHandle& report, const std::string& out, bool include_graph) {
  check(kc_report_emit(report.ptr, out.c_str(), include_graph ? 1 : 0));
  std::fputs(kc_report_summary(report.ptr), stdout);
  std::printf("wrote %s\n", out.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic extraction with K-edge-connected components of word similarity graphs"};
  app.set_version_flag("--version", std::string(kc_version()));
  app.require_subcommand(1);

  CommonOptions train_opts;
  bool binary = false;
  auto* train = app.add_subcommand("train-embeddings", "train skip-gram embeddings on the corpus");
  add_common(train, train_opts, true);
  train->add_flag("--binary", binary, "write word2vec binary instead of text");

  CommonOptions extract_opts;
  bool dump_graph = false;
  auto* extract = app.add_subcommand("extract", "run the K-Components pipeline");
  add_common(extract, extract_opts, false);
  extract->add_flag("--dump-graph", dump_graph, "also write the pruned graph as graph.tsv");

  CommonOptions kmeans_opts;
  auto* kmeans = app.add_subcommand("baseline-kmeans", "run the weighted k-means baseline");
  add_common(kmeans, kmeans_opts, false);

  CommonOptions eval_opts;
  std::string topics_path;
  auto* evaluate = app.add_subcommand("evaluate", "score topics from a topics.json file");
  add_common(evaluate, eval_opts, false);
  evaluate->add_option("--topics", topics_path, "topics.json to score")
      ->required()
      ->check(CLI::ExistingFile);

  std::string run_dir, gold_map, report_out;
  std::vector<std::string> external;
  auto* report = app.add_subcommand("report", "summarize a run, optionally mapping gold topics");
  report->add_option("--run", run_dir, "directory holding run.json")
      ->required()
      ->check(CLI::ExistingDirectory);
  report->add_option("--gold-map", gold_map, "topic_id<TAB>gold_label file")
      ->check(CLI::ExistingFile);
  report->add_option("--external", external, "external baseline CSV, repeatable")
      ->check(CLI::ExistingFile);
  report->add_option("--out", report_out, "write the updated report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : KC_ERR_USAGE;
  }

  try {
    if (train->parsed()) {
      ConfigHandle cfg;
      open_config(train_opts, cfg);
      std::error_code ec;
      std::filesystem::create_directories(train_opts.out, ec);
      if (ec) {
        std::fprintf(stderr, "kcomp: cannot create %s: %s\n", train_opts.out.c_str(),
                     ec.message().c_str());
        return KC_ERR_DATA;
      }
      const auto path =
          std::filesystem::path(train_opts.out) / (binary ? "embeddings.bin" : "embeddings.txt");
      size_t words = 0;
      check(kc_train_embeddings(cfg.ptr, path.c_str(), binary ? 1 : 0, &words));
      std::printf("trained %zu vectors, wrote %s\n", words, path.c_str());
    } else if (extract->parsed()) {
      ConfigHandle cfg;
      open_config(extract_opts, cfg);
      ReportHandle rep;
      check(kc_run_extract(cfg.ptr, &rep.ptr));
      finish(rep, extract_opts.out, dump_graph);
    } else if (kmeans->parsed()) {
      ConfigHandle cfg;
      open_config(kmeans_opts, cfg);
      ReportHandle rep;
      check(kc_run_kmeans(cfg.ptr, &rep.ptr));
      finish(rep, kmeans_opts.out, false);
    } else if (evaluate->parsed()) {
      ConfigHandle cfg;
      open_config(eval_opts, cfg);
      ReportHandle rep;
      check(kc_run_evaluate(cfg.ptr, topics_path.c_str(), &rep.ptr));
      finish(rep, eval_opts.out, false);
    } else if (report->parsed()) {
      ReportHandle rep;
      check(kc_report_load(run_dir.c_str(), &rep.ptr));
      if (!gold_map.empty()) check(kc_report_map_gold(rep.ptr, gold_map.c_str()));
      for (const auto& csv : external) check(kc_report_import_external(rep.ptr, csv.c_str()));
      if (!report_out.empty()) {
        finish(rep, report_out, false);
      } else {
        std::fputs(kc_report_summary(rep.ptr), stdout);
      }
    }
  } catch (const Failure& f) {
    return static_cast<int>(f.status);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "kcomp: %s\n", e.what());
    return KC_ERR_INTERNAL;
  }
  return 0;
}
