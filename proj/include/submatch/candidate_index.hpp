#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "submatch/graph.hpp"
#include "submatch/intersect.hpp"
#include "submatch/types.hpp"

namespace submatch {

// Conditional candidate sets over query edges: for each directed query edge
// (un, u) and each candidate vn of un, the list of candidates of u adjacent
// to vn in the data graph. Both directions of every edge are materialized;
// lists are flattened per edge and addressed by the rank of vn in C(un).
//
// After construction the index answers every adjacency question the search
// needs, so enumeration never touches the data graph.
class EdgeCandidateIndex {
 public:
  EdgeCandidateIndex() = default;

  static EdgeCandidateIndex build(const Graph& q, const Graph& g, const CandidateSets& cands) {
    if (cands.size() != q.vertex_count())
      throw std::invalid_argument("candidate sets do not match query vertex count");
    EdgeCandidateIndex idx;
    idx.nq_ = q.vertex_count();
    idx.cands_ = cands;
    idx.slot_.assign(static_cast<std::size_t>(idx.nq_) * idx.nq_, -1);
    std::vector<VertexId> scratch;
    for (VertexId un = 0; un < idx.nq_; ++un) {
      for (VertexId u : q.neighbors(un)) {
        EdgeLists lists;
        lists.offsets.reserve(cands[un].size() + 1);
        lists.offsets.push_back(0);
        for (VertexId vn : cands[un]) {
          intersect_sorted_into(cands[u], g.neighbors(vn), scratch);
          lists.payload.insert(lists.payload.end(), scratch.begin(), scratch.end());
          lists.offsets.push_back(static_cast<std::uint32_t>(lists.payload.size()));
        }
        idx.slot_[static_cast<std::size_t>(un) * idx.nq_ + u] =
            static_cast<std::int32_t>(idx.lists_.size());
        idx.lists_.push_back(std::move(lists));
      }
    }
    return idx;
  }

  // Builds from explicitly given conditional sets instead of a data graph.
  // `entries(un, u, vn)` must return the ascending list for candidate vn of
  // un along the query edge (un, u); both orientations of each edge in
  // `query_edges` are materialized.
  template <typename EntryFn>
  static EdgeCandidateIndex from_lists(std::uint32_t nq,
                                       const std::vector<std::pair<VertexId, VertexId>>& query_edges,
                                       const CandidateSets& cands, EntryFn&& entries) {
    EdgeCandidateIndex idx;
    idx.nq_ = nq;
    idx.cands_ = cands;
    idx.slot_.assign(static_cast<std::size_t>(nq) * nq, -1);
    for (auto [a, b] : query_edges) {
      for (auto [un, u] : {std::pair{a, b}, std::pair{b, a}}) {
        EdgeLists lists;
        lists.offsets.push_back(0);
        for (VertexId vn : cands[un]) {
          std::vector<VertexId> entry = entries(un, u, vn);
          lists.payload.insert(lists.payload.end(), entry.begin(), entry.end());
          lists.offsets.push_back(static_cast<std::uint32_t>(lists.payload.size()));
        }
        idx.slot_[static_cast<std::size_t>(un) * nq + u] =
            static_cast<std::int32_t>(idx.lists_.size());
        idx.lists_.push_back(std::move(lists));
      }
    }
    return idx;
  }

  std::uint32_t query_vertex_count() const { return nq_; }

  const CandidateSets& candidates() const { return cands_; }

  bool has_edge(VertexId un, VertexId u) const {
    return un < nq_ && u < nq_ && slot_[static_cast<std::size_t>(un) * nq_ + u] >= 0;
  }

  // Rank of v in C(u), or kInvalidRank when v is not a candidate of u.
  static constexpr std::uint32_t kInvalidRank = static_cast<std::uint32_t>(-1);
  std::uint32_t candidate_rank(VertexId u, VertexId v) const {
    const auto& set = cands_[u];
    auto it = std::lower_bound(set.begin(), set.end(), v);
    if (it == set.end() || *it != v) return kInvalidRank;
    return static_cast<std::uint32_t>(it - set.begin());
  }

  // Candidates of u adjacent to the vn that holds `rank` in C(un).
  std::span<const VertexId> lookup_by_rank(VertexId un, VertexId u, std::uint32_t rank) const {
    const EdgeLists& lists = edge_lists(un, u);
    return {lists.payload.data() + lists.offsets[rank],
            lists.offsets[rank + 1] - lists.offsets[rank]};
  }

  std::span<const VertexId> lookup(VertexId un, VertexId u, VertexId vn) const {
    std::uint32_t rank = candidate_rank(un, vn);
    if (rank == kInvalidRank)
      throw std::invalid_argument("vertex " + std::to_string(vn) + " is not a candidate of " +
                                  std::to_string(un));
    return lookup_by_rank(un, u, rank);
  }

  std::uint64_t total_entries() const {
    std::uint64_t n = 0;
    for (const auto& lists : lists_) n += lists.payload.size();
    return n;
  }

 private:
  struct EdgeLists {
    std::vector<std::uint32_t> offsets;
    std::vector<VertexId> payload;
  };

  const EdgeLists& edge_lists(VertexId un, VertexId u) const {
    if (un >= nq_ || u >= nq_ || slot_[static_cast<std::size_t>(un) * nq_ + u] < 0)
      throw std::invalid_argument("no query edge " + std::to_string(un) + "-" +
                                  std::to_string(u));
    return lists_[static_cast<std::size_t>(slot_[static_cast<std::size_t>(un) * nq_ + u])];
  }

  std::uint32_t nq_ = 0;
  CandidateSets cands_;
  std::vector<std::int32_t> slot_;
  std::vector<EdgeLists> lists_;
};

inline EdgeCandidateIndex build_ccs(const Graph& q, const Graph& g, const CandidateSets& cands) {
  return EdgeCandidateIndex::build(q, g, cands);
}

}  // namespace submatch
