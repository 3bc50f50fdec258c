#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "submatch/graph.hpp"
#include "submatch/pipeline.hpp"
#include "submatch/types.hpp"

namespace submatch {

inline int log_level() {
  static int level = [] {
    const char* env = std::getenv("MATCH_LOG");
    if (!env) return 0;
    std::string v(env);
    if (v == "debug") return 2;
    if (v == "info") return 1;
    return 0;
  }();
  return level;
}

inline void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[match] " << msg << std::endl;
}

inline void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[match] " << msg << std::endl;
}

struct RunRecord {
  std::string dataset;
  std::string query;
  FilterKind filter = FilterKind::kFgql;
  EngineKind engine = EngineKind::kDgee;
  double avg_candidates = 0.0;
  std::uint64_t search_nodes = 0;
  std::uint64_t embeddings = 0;
  double filter_ms = 0.0;
  double order_ms = 0.0;
  double enum_ms = 0.0;
  double total_ms = 0.0;
  std::string status = "solved";
};

inline const char* csv_header() {
  return "dataset,query,filter,engine,avg_candidates,search_nodes,embeddings,filter_ms,"
         "order_ms,enum_ms,total_ms,status";
}

inline std::string to_csv_row(const RunRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s,%s,%s,%s,%.3f,%llu,%llu,%.3f,%.3f,%.3f,%.3f,%s",
                r.dataset.c_str(), r.query.c_str(), to_string(r.filter), to_string(r.engine),
                r.avg_candidates, static_cast<unsigned long long>(r.search_nodes),
                static_cast<unsigned long long>(r.embeddings), r.filter_ms, r.order_ms, r.enum_ms,
                r.total_ms, r.status.c_str());
  return buf;
}

// Runs one query against a loaded data graph. When `dump` is non-null each
// embedding is written to it as the mapped data vertices in matching order,
// space separated, one line per embedding.
inline RunRecord run_single(const Graph& data, const std::string& dataset_name, const Graph& query,
                            const std::string& query_name, const PipelineConfig& config,
                            std::ostream* dump = nullptr) {
  RunRecord record;
  record.dataset = dataset_name;
  record.query = query_name;
  record.filter = config.filter;
  record.engine = config.engine;

  EmbeddingSink sink;
  std::vector<VertexId> positions;
  if (dump) {
    positions = ri_order(query).order;
    sink = [dump, &positions](std::span<const VertexId> mapping) {
      for (std::size_t k = 0; k < positions.size(); ++k) {
        if (k) *dump << ' ';
        *dump << mapping[positions[k]];
      }
      *dump << '\n';
    };
  }

  PipelineResult result = run_pipeline(query, data, config, sink);
  record.avg_candidates = result.avg_candidates;
  record.search_nodes = result.stats.search_nodes;
  record.embeddings = result.stats.embeddings_found;
  record.filter_ms = result.filter_ms;
  record.order_ms = result.order_ms;
  record.enum_ms = result.enum_ms;
  record.total_ms = result.total_ms;
  record.status = to_string(result.stats.status);
  return record;
}

struct SuiteSummary {
  std::size_t queries = 0;
  std::size_t unsolved = 0;
  double mean_avg_candidates = 0.0;
  // Timeout rows are charged the full time budget here, whatever wall time
  // they actually consumed.
  double mean_total_ms = 0.0;
};

// Runs every query file against the data graph, in sorted filename order.
// Queries that fail to load or run produce a record with status "error".
// With workers > 1 the queries are distributed over threads; record order
// stays deterministic.
inline std::vector<RunRecord> run_suite(const Graph& data, const std::string& dataset_name,
                                        const std::vector<std::filesystem::path>& query_paths,
                                        const PipelineConfig& config, std::uint32_t workers = 1) {
  std::vector<RunRecord> records(query_paths.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= query_paths.size()) break;
      const auto& path = query_paths[i];
      std::string name = path.stem().string();
      try {
        Graph query = Graph::load_file(path);
        records[i] = run_single(data, dataset_name, query, name, config);
        log_debug(name + ": " + records[i].status + ", " +
                  std::to_string(records[i].embeddings) + " embeddings");
      } catch (const std::exception& e) {
        log_info(name + ": error: " + e.what());
        records[i] = RunRecord{};
        records[i].dataset = dataset_name;
        records[i].query = name;
        records[i].filter = config.filter;
        records[i].engine = config.engine;
        records[i].status = "error";
      }
    }
  };

  std::size_t thread_count = std::min<std::size_t>(std::max(workers, 1u), query_paths.size());
  if (thread_count <= 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < thread_count; ++t) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  return records;
}

inline SuiteSummary summarize(const std::vector<RunRecord>& records, double budget_ms) {
  SuiteSummary summary;
  summary.queries = records.size();
  for (const auto& r : records) {
    if (r.status != "solved") ++summary.unsolved;
    summary.mean_avg_candidates += r.avg_candidates;
    summary.mean_total_ms += r.status == "timeout" ? budget_ms : r.total_ms;
  }
  if (!records.empty()) {
    summary.mean_avg_candidates /= static_cast<double>(records.size());
    summary.mean_total_ms /= static_cast<double>(records.size());
  }
  return summary;
}

inline std::vector<std::filesystem::path> query_files_in(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".graph")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  return paths;
}

}  // namespace submatch
