#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "submatch/graph.hpp"
#include "submatch/harness.hpp"
#include "submatch/pipeline.hpp"

namespace submatch {

// The `match` command line. Runs one query file, or every *.graph file in a
// directory, against a data graph and emits one CSV row per query. Returns
// the process exit code; completing a suite counts as success even when
// single queries time out or fail to load.
inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"labeled subgraph matching"};
  app.name("match");

  std::string data_path, query_path;
  std::string filter_name = "fgql", engine_name = "dgee";
  std::uint64_t max_matches = 100000;
  double time_limit = 300.0;
  std::uint32_t workers = 1;
  std::string out_path, dump_path;
  std::uint64_t seed = 0;

  app.add_option("--data", data_path, "data graph file")->required();
  app.add_option("--query", query_path, "query graph file, or a directory of *.graph files")
      ->required();
  app.add_option("--filter", filter_name, "candidate filter: nlf, gql, fgql, cfl")
      ->check(CLI::IsMember({"nlf", "gql", "fgql", "cfl"}));
  app.add_option("--engine", engine_name, "search engine: baseline, fs, dgee, oracle")
      ->check(CLI::IsMember({"baseline", "fs", "dgee", "oracle"}));
  app.add_option("--max-matches", max_matches, "stop after this many embeddings per query")
      ->check(CLI::PositiveNumber);
  app.add_option("--time-limit", time_limit, "per-query time budget in seconds")
      ->check(CLI::PositiveNumber);
  app.add_option("--workers", workers, "suite worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "write CSV here instead of stdout");
  app.add_option("--dump", dump_path, "write embeddings here (single query only)");
  app.add_option("--seed", seed, "seed recorded for the run; matching itself is deterministic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  PipelineConfig config;
  config.filter = parse_filter(filter_name);
  config.engine = parse_engine(engine_name);
  config.limits.max_matches = max_matches;
  config.limits.time_limit = std::chrono::duration<double>(time_limit);

  namespace fs = std::filesystem;
  try {
    log_info("loading data graph " + data_path);
    Graph data = Graph::load_file(data_path);
    std::string dataset = fs::path(data_path).stem().string();
    log_debug("data graph: " + std::to_string(data.vertex_count()) + " vertices, " +
              std::to_string(data.edge_count()) + " edges, seed " + std::to_string(seed));

    std::ofstream out_file;
    if (!out_path.empty()) {
      out_file.open(out_path, std::ios::binary);
      if (!out_file) throw std::runtime_error("cannot write " + out_path);
    }
    std::ostream& csv = out_path.empty() ? std::cout : out_file;

    if (fs::is_directory(query_path)) {
      if (!dump_path.empty()) {
        std::cerr << "match: --dump needs a single query file" << std::endl;
        return 1;
      }
      auto paths = query_files_in(query_path);
      log_info("running " + std::to_string(paths.size()) + " queries with filter " + filter_name +
               ", engine " + engine_name);
      auto records = run_suite(data, dataset, paths, config, workers);
      csv << csv_header() << "\n";
      for (const auto& r : records) csv << to_csv_row(r) << "\n";
      auto summary = summarize(records, time_limit * 1000.0);
      std::ostream& info = out_path.empty() ? std::cerr : std::cout;
      info << "queries: " << summary.queries << ", unsolved: " << summary.unsolved << "\n";
      char line[128];
      std::snprintf(line, sizeof line,
                    "mean avg_candidates: %.3f\nmean total_ms: %.3f (timeouts at full budget)",
                    summary.mean_avg_candidates, summary.mean_total_ms);
      info << line << std::endl;
      return 0;
    }

    Graph query = Graph::load_file(query_path);
    std::ofstream dump_file;
    std::ostream* dump = nullptr;
    if (!dump_path.empty()) {
      dump_file.open(dump_path, std::ios::binary);
      if (!dump_file) throw std::runtime_error("cannot write " + dump_path);
      dump = &dump_file;
    }
    RunRecord record =
        run_single(data, dataset, query, fs::path(query_path).stem().string(), config, dump);
    csv << csv_header() << "\n" << to_csv_row(record) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "match: " << e.what() << std::endl;
    return 1;
  }
}

}  // namespace submatch
