#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "submatch/candidate_index.hpp"
#include "submatch/intersect.hpp"
#include "submatch/ordering.hpp"
#include "submatch/types.hpp"

namespace submatch {

enum class SearchStatus { kSolved, kMatchCap, kTimeout };

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::kSolved: return "solved";
    case SearchStatus::kMatchCap: return "match-cap";
    case SearchStatus::kTimeout: return "timeout";
  }
  return "unknown";
}

struct SearchLimits {
  std::uint64_t max_matches = 100000;
  std::chrono::duration<double> time_limit = std::chrono::seconds(300);
  // When set, overrides time_limit.
  std::optional<std::chrono::steady_clock::time_point> deadline;
  // External cancellation; reported as a timeout.
  const std::atomic<bool>* cancel = nullptr;
};

struct SearchStats {
  std::uint64_t embeddings_found = 0;
  std::uint64_t search_nodes = 0;
  std::uint64_t intersections = 0;
  double elapsed_ms = 0.0;
  SearchStatus status = SearchStatus::kSolved;
};

// Receives each full embedding as the data vertex mapped to every query
// vertex, indexed by query vertex id. Called sequentially from the search;
// the span is only valid during the call.
using EmbeddingSink = std::function<void(std::span<const VertexId>)>;

// Deadline and cancellation are polled once per this many expansions.
inline constexpr std::uint64_t kCheckInterval = 4096;

// Local candidates of position k: C(order[k]) narrowed through the
// conditional lists of every already-assigned backward neighbor.
// `assigned` holds the data vertices at positions 0..k-1. For k = 0 this is
// C(order[0]) unchanged.
inline std::vector<VertexId> compute_vc(const EdgeCandidateIndex& idx, const MatchingOrder& order,
                                        std::span<const VertexId> assigned, std::uint32_t k,
                                        std::uint64_t* intersections = nullptr) {
  const CandidateSets& cands = idx.candidates();
  if (k == 0) return cands[order.order[0]];
  std::vector<VertexId> result;
  std::vector<VertexId> tmp;
  bool first = true;
  for (std::uint32_t j : order.backward_neighbors[k]) {
    auto list = idx.lookup(order.order[j], order.order[k], assigned[j]);
    if (first) {
      result.assign(list.begin(), list.end());
      first = false;
      continue;
    }
    intersect_sorted_into(result, list, tmp);
    std::swap(result, tmp);
    if (intersections) ++*intersections;
    if (result.empty()) break;
  }
  return result;
}

namespace detail {

class Searcher {
 public:
  Searcher(const EdgeCandidateIndex& idx, const MatchingOrder& order, const CandidateSets& cands,
           const SearchLimits& limits, const EmbeddingSink& sink)
      : idx_(idx), order_(order), cands_(cands), limits_(limits), sink_(sink) {
    nq_ = order_.size();
    if (nq_ == 0) throw std::invalid_argument("matching order is empty");
    if (cands_.size() != nq_ || idx_.query_vertex_count() != nq_)
      throw std::invalid_argument("order, candidates and index disagree on query size");

    VertexId max_candidate = 0;
    for (const auto& set : cands_.sets)
      for (VertexId v : set) max_candidate = std::max(max_candidate, v);
    mapped_by_.assign(cands_.total_candidates() == 0 ? 0 : max_candidate + 1, kInvalidVertex);

    mapping_pos_.assign(nq_, kInvalidVertex);
    mapping_vertex_.assign(nq_, kInvalidVertex);
    rank_pos_.assign(nq_, 0);
    vc_.resize(nq_);
    tmp_.resize(nq_);
    deadline_ = limits_.deadline.value_or(std::chrono::steady_clock::now() +
                                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                              limits_.time_limit));
  }

  SearchStats run_baseline() {
    return timed([&] {
      vc_[0] = cands_[order_.order[0]];
      baseline_step(0);
    });
  }

  SearchStats run_failing_set() {
    require_bitset_capacity();
    init_static_ancestors();
    init_failing_sets();
    return timed([&] {
      vc_[0] = cands_[order_.order[0]];
      failing_set_step(0);
    });
  }

  SearchStats run_dgee() {
    require_bitset_capacity();
    init_failing_sets();
    dyn_ancestors_.assign(nq_, {});
    for (VertexId u = 0; u < nq_; ++u) dyn_ancestors_[u].set(u);
    local_.assign(cands_.sets.begin(), cands_.sets.end());
    forward_neighbors_.assign(nq_, {});
    for (std::uint32_t j = 0; j < nq_; ++j)
      for (std::uint32_t b : order_.backward_neighbors[j]) forward_neighbors_[b].push_back(j);
    trail_.assign(nq_, {});
    token_of_.assign(nq_, 0);
    edit_token_ = 0;
    return timed([&] { dgee_step(0); });
  }

 private:
  template <typename Body>
  SearchStats timed(Body&& body) {
    auto start = std::chrono::steady_clock::now();
    body();
    stats_.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return stats_;
  }

  void require_bitset_capacity() {
    if (nq_ > kMaxQueryVertices)
      throw std::invalid_argument("query exceeds " + std::to_string(kMaxQueryVertices) +
                                  " vertices");
  }

  void init_static_ancestors() {
    static_anc_.assign(nq_, {});
    for (std::uint32_t k = 0; k < nq_; ++k) {
      static_anc_[k].set(order_.order[k]);
      for (std::uint32_t j : order_.backward_neighbors[k]) static_anc_[k] |= static_anc_[j];
    }
  }

  void init_failing_sets() {
    fs_.assign(nq_, {});
    all_mask_.reset();
    for (std::uint32_t k = 0; k < nq_; ++k) all_mask_.set(order_.order[k]);
  }

  void assign(std::uint32_t k, VertexId v) {
    mapping_pos_[k] = v;
    mapping_vertex_[order_.order[k]] = v;
    mapped_by_[v] = order_.order[k];
    rank_pos_[k] = idx_.candidate_rank(order_.order[k], v);
    ++stats_.search_nodes;
    if ((stats_.search_nodes & (kCheckInterval - 1)) == 0) poll_limits();
  }

  void unassign(std::uint32_t k) { mapped_by_[mapping_pos_[k]] = kInvalidVertex; }

  void poll_limits() {
    if (limits_.cancel && limits_.cancel->load(std::memory_order_relaxed)) {
      stats_.status = SearchStatus::kTimeout;
      stop_ = true;
      return;
    }
    if (std::chrono::steady_clock::now() >= deadline_) {
      stats_.status = SearchStatus::kTimeout;
      stop_ = true;
    }
  }

  void emit() {
    ++stats_.embeddings_found;
    if (sink_) sink_(mapping_vertex_);
    if (stats_.embeddings_found >= limits_.max_matches) {
      stats_.status = SearchStatus::kMatchCap;
      stop_ = true;
    }
  }

  // Narrows C(order[k]) through the conditional lists of the assigned
  // backward neighbors, smallest list first.
  void compute_vc_level(std::uint32_t k) {
    const auto& bn = order_.backward_neighbors[k];
    lists_.clear();
    for (std::uint32_t j : bn)
      lists_.push_back(idx_.lookup_by_rank(order_.order[j], order_.order[k], rank_pos_[j]));
    std::sort(lists_.begin(), lists_.end(),
              [](const auto& a, const auto& b) { return a.size() < b.size(); });
    auto& out = vc_[k];
    out.assign(lists_[0].begin(), lists_[0].end());
    for (std::size_t i = 1; i < lists_.size() && !out.empty(); ++i) {
      intersect_sorted_into(out, lists_[i], tmp_[k]);
      std::swap(out, tmp_[k]);
      ++stats_.intersections;
    }
  }

  void baseline_step(std::uint32_t k) {
    for (VertexId v : vc_[k]) {
      if (stop_) return;
      if (mapped_by_[v] != kInvalidVertex) continue;
      assign(k, v);
      if (k + 1 == nq_) {
        emit();
      } else if (!stop_) {
        compute_vc_level(k + 1);
        if (!vc_[k + 1].empty()) baseline_step(k + 1);
      }
      unassign(k);
    }
  }

  // Failing-set search. On return fs_[k] is the failing set of the subtree
  // just explored: the query vertices whose current assignments are jointly
  // responsible for every failure in it, or the full mask once an embedding
  // was found below (nothing above may prune past a success). When one
  // candidate's subtree fails without order[k] among the culprits, siblings
  // at k cannot change the outcome and the search backjumps, handing exactly
  // that attribution upward; otherwise attributions accumulate.
  void failing_set_step(std::uint32_t k) {
    fs_[k].reset();
    for (VertexId v : vc_[k]) {
      if (stop_) return;
      if (mapped_by_[v] != kInvalidVertex) {
        fs_[k] |= static_anc_[k] | static_anc_[order_.position_of[mapped_by_[v]]];
        continue;
      }
      assign(k, v);
      QueryBitset child;
      if (k + 1 == nq_) {
        emit();
        child = all_mask_;
      } else if (!stop_) {
        compute_vc_level(k + 1);
        if (vc_[k + 1].empty()) {
          child = static_anc_[k + 1];
        } else {
          failing_set_step(k + 1);
          child = fs_[k + 1];
        }
      }
      unassign(k);
      if (stop_) return;
      if (!child.test(order_.order[k])) {
        fs_[k] = child;
        return;
      }
      fs_[k] |= child;
    }
  }

  // Editing search. Every unplaced query vertex keeps a live local
  // candidate list: assigning a data vertex narrows each unplaced neighbor
  // through the new edge's conditional list and deletes the vertex from all
  // other lists, as if the data graph were cut down to the part consistent
  // with the partial embedding. A list that empties ends the branch at the
  // assignment itself, often several levels before plain lookahead would
  // reach that vertex, and its dynamic ancestors (only the levels whose
  // edits actually removed something) hand the failing-set discipline a
  // sharper attribution than the static closure.
  void dgee_step(std::uint32_t k) {
    fs_[k].reset();
    VertexId u = order_.order[k];
    // Deeper levels only edit lists of vertices placed after u and restore
    // them on the way back, so iterating the live list by index is stable.
    auto& pool = local_[u];
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (stop_) return;
      VertexId v = pool[i];
      assign(k, v);
      QueryBitset child;
      if (k + 1 == nq_) {
        emit();
        child = all_mask_;
      } else if (!stop_) {
        VertexId culprit = apply_edits(k, v);
        if (culprit != kInvalidVertex) {
          child = dyn_ancestors_[culprit];
        } else {
          dgee_step(k + 1);
          child = fs_[k + 1];
        }
        undo_edits(k);
      }
      unassign(k);
      if (stop_) return;
      if (!child.test(u)) {
        fs_[k] = child;
        return;
      }
      fs_[k] |= child;
    }
  }

  // Performs the edits for mapping v at position k and reports the first
  // query vertex whose list emptied (kInvalidVertex while the branch stays
  // alive). Ancestor sets grow only on edits that removed something, and
  // every touched list is recorded in the level's trail for undo.
  VertexId apply_edits(std::uint32_t k, VertexId v) {
    VertexId u = order_.order[k];
    auto& edits = trail_[k];
    edits.clear();
    ++edit_token_;
    auto save = [&](VertexId w) {
      if (token_of_[w] == edit_token_) return;
      token_of_[w] = edit_token_;
      edits.push_back({w, local_[w], dyn_ancestors_[w]});
    };
    for (std::uint32_t j : forward_neighbors_[k]) {
      VertexId un = order_.order[j];
      save(un);
      auto list = idx_.lookup_by_rank(u, un, rank_pos_[k]);
      auto& dst = local_[un];
      intersect_sorted_into(dst, list, tmp_[k]);
      ++stats_.intersections;
      if (tmp_[k].size() != dst.size()) dyn_ancestors_[un] |= dyn_ancestors_[u];
      std::swap(dst, tmp_[k]);
      if (dst.empty()) return un;
    }
    for (std::uint32_t j = k + 1; j < nq_; ++j) {
      VertexId w = order_.order[j];
      auto& dst = local_[w];
      auto it = std::lower_bound(dst.begin(), dst.end(), v);
      if (it == dst.end() || *it != v) continue;
      save(w);
      dst.erase(it);
      dyn_ancestors_[w] |= dyn_ancestors_[u];
      if (dst.empty()) return w;
    }
    return kInvalidVertex;
  }

  void undo_edits(std::uint32_t k) {
    auto& edits = trail_[k];
    for (auto it = edits.rbegin(); it != edits.rend(); ++it) {
      local_[it->vertex] = std::move(it->saved_list);
      dyn_ancestors_[it->vertex] = it->saved_ancestors;
    }
    edits.clear();
  }

  const EdgeCandidateIndex& idx_;
  const MatchingOrder& order_;
  const CandidateSets& cands_;
  const SearchLimits& limits_;
  const EmbeddingSink& sink_;

  std::uint32_t nq_ = 0;
  std::chrono::steady_clock::time_point deadline_;
  bool stop_ = false;
  SearchStats stats_;

  std::vector<VertexId> mapping_pos_;
  std::vector<VertexId> mapping_vertex_;
  std::vector<VertexId> mapped_by_;
  std::vector<std::uint32_t> rank_pos_;
  std::vector<std::vector<VertexId>> vc_;
  std::vector<std::vector<VertexId>> tmp_;
  std::vector<std::span<const VertexId>> lists_;

  std::vector<QueryBitset> static_anc_;
  std::vector<QueryBitset> fs_;
  std::vector<QueryBitset> dyn_ancestors_;
  QueryBitset all_mask_;

  struct SetEdit {
    VertexId vertex;
    std::vector<VertexId> saved_list;
    QueryBitset saved_ancestors;
  };
  std::vector<std::vector<VertexId>> local_;
  std::vector<std::vector<std::uint32_t>> forward_neighbors_;
  std::vector<std::vector<SetEdit>> trail_;
  std::vector<std::uint64_t> token_of_;
  std::uint64_t edit_token_ = 0;
};

}  // namespace detail

inline SearchStats enumerate_baseline(const EdgeCandidateIndex& idx, const MatchingOrder& order,
                                      const CandidateSets& cands, const SearchLimits& limits,
                                      const EmbeddingSink& sink) {
  detail::Searcher s(idx, order, cands, limits, sink);
  return s.run_baseline();
}

inline SearchStats enumerate_failing_set(const EdgeCandidateIndex& idx, const MatchingOrder& order,
                                         const CandidateSets& cands, const SearchLimits& limits,
                                         const EmbeddingSink& sink) {
  detail::Searcher s(idx, order, cands, limits, sink);
  return s.run_failing_set();
}

inline SearchStats enumerate_dgee(const EdgeCandidateIndex& idx, const MatchingOrder& order,
                                  const CandidateSets& cands, const SearchLimits& limits,
                                  const EmbeddingSink& sink) {
  detail::Searcher s(idx, order, cands, limits, sink);
  return s.run_dgee();
}

struct EnumerationResult {
  std::vector<std::vector<VertexId>> embeddings;
  SearchStats stats;
};

template <typename EnumFn>
EnumerationResult collect(EnumFn&& enumerate, const EdgeCandidateIndex& idx,
                          const MatchingOrder& order, const CandidateSets& cands,
                          const SearchLimits& limits = {}) {
  EnumerationResult result;
  result.stats = enumerate(idx, order, cands, limits, [&](std::span<const VertexId> m) {
    result.embeddings.emplace_back(m.begin(), m.end());
  });
  return result;
}

}  // namespace submatch
