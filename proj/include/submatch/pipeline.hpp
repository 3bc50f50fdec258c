#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "submatch/candidate_index.hpp"
#include "submatch/engine.hpp"
#include "submatch/filtering.hpp"
#include "submatch/graph.hpp"
#include "submatch/oracle.hpp"
#include "submatch/ordering.hpp"
#include "submatch/types.hpp"

namespace submatch {

enum class FilterKind { kNlf, kGql, kFgql, kCfl };
enum class EngineKind { kBaseline, kFailingSet, kDgee, kOracle };

inline const char* to_string(FilterKind f) {
  switch (f) {
    case FilterKind::kNlf: return "nlf";
    case FilterKind::kGql: return "gql";
    case FilterKind::kFgql: return "fgql";
    case FilterKind::kCfl: return "cfl";
  }
  return "unknown";
}

inline const char* to_string(EngineKind e) {
  switch (e) {
    case EngineKind::kBaseline: return "baseline";
    case EngineKind::kFailingSet: return "fs";
    case EngineKind::kDgee: return "dgee";
    case EngineKind::kOracle: return "oracle";
  }
  return "unknown";
}

inline FilterKind parse_filter(const std::string& name) {
  if (name == "nlf") return FilterKind::kNlf;
  if (name == "gql") return FilterKind::kGql;
  if (name == "fgql") return FilterKind::kFgql;
  if (name == "cfl") return FilterKind::kCfl;
  throw std::invalid_argument("unknown filter '" + name + "'");
}

inline EngineKind parse_engine(const std::string& name) {
  if (name == "baseline") return EngineKind::kBaseline;
  if (name == "fs") return EngineKind::kFailingSet;
  if (name == "dgee") return EngineKind::kDgee;
  if (name == "oracle") return EngineKind::kOracle;
  throw std::invalid_argument("unknown engine '" + name + "'");
}

struct PipelineConfig {
  FilterKind filter = FilterKind::kFgql;
  EngineKind engine = EngineKind::kDgee;
  std::uint32_t cfl_rounds = 1;
  SearchLimits limits;
};

struct PipelineResult {
  SearchStats stats;
  FilterStats filter_stats;
  double avg_candidates = 0.0;
  double filter_ms = 0.0;
  double order_ms = 0.0;
  double enum_ms = 0.0;
  double total_ms = 0.0;
  std::vector<VertexId> matching_order;
};

// Runs filter, ordering and enumeration on one query. The deadline covers
// the whole pipeline: preprocessing overruns surface as a timeout before
// any search starts.
inline PipelineResult run_pipeline(const Graph& q, const Graph& g, const PipelineConfig& config,
                                   const EmbeddingSink& sink = {}) {
  using clock = std::chrono::steady_clock;
  auto ms_since = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };

  PipelineResult result;
  SearchLimits limits = config.limits;
  auto start = clock::now();
  if (!limits.deadline)
    limits.deadline = start + std::chrono::duration_cast<clock::duration>(limits.time_limit);

  // Preprocessing: candidate filtering plus the conditional index.
  auto filter_start = clock::now();
  CandidateSets cands = nlf_filter(q, g);
  switch (config.filter) {
    case FilterKind::kNlf:
      break;
    case FilterKind::kGql:
      cands = gql_filter(q, g, cands, &result.filter_stats);
      break;
    case FilterKind::kFgql:
      cands = fgql_filter(q, g, cands, &result.filter_stats);
      break;
    case FilterKind::kCfl:
      cands = cfl_filter(q, g, cands, config.cfl_rounds);
      break;
  }
  result.avg_candidates = cands.average_candidates();
  bool searchable = !cands.any_empty() && config.engine != EngineKind::kOracle;
  EdgeCandidateIndex idx;
  if (searchable) idx = build_ccs(q, g, cands);
  result.filter_ms = ms_since(filter_start);

  auto order_start = clock::now();
  MatchingOrder order = ri_order(q);
  result.matching_order = order.order;
  result.order_ms = ms_since(order_start);

  // An empty candidate set anywhere rules out every embedding.
  if (cands.any_empty()) {
    result.total_ms = ms_since(start);
    return result;
  }
  if (clock::now() >= *limits.deadline) {
    result.stats.status = SearchStatus::kTimeout;
    result.total_ms = ms_since(start);
    return result;
  }

  auto enum_start = clock::now();
  switch (config.engine) {
    case EngineKind::kBaseline:
      result.stats = enumerate_baseline(idx, order, cands, limits, sink);
      break;
    case EngineKind::kFailingSet:
      result.stats = enumerate_failing_set(idx, order, cands, limits, sink);
      break;
    case EngineKind::kDgee:
      result.stats = enumerate_dgee(idx, order, cands, limits, sink);
      break;
    case EngineKind::kOracle: {
      auto embeddings = oracle_enumerate(q, g, limits.max_matches);
      if (sink)
        for (const auto& m : embeddings) sink(m);
      result.stats.embeddings_found = embeddings.size();
      result.stats.status = embeddings.size() >= limits.max_matches ? SearchStatus::kMatchCap
                                                                    : SearchStatus::kSolved;
      break;
    }
  }
  result.enum_ms = ms_since(enum_start);
  result.total_ms = ms_since(start);
  return result;
}

}  // namespace submatch
