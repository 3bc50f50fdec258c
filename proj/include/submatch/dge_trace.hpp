#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "submatch/intersect.hpp"
#include "submatch/types.hpp"

namespace submatch {

// One level of the editing trace: the local candidate sets after the
// assignment, plus the query edges added and deleted by it. Sets of already
// assigned vertices are left empty.
struct TraceLevel {
  std::vector<std::vector<VertexId>> vc;
  std::vector<std::pair<VertexId, VertexId>> edges_added;
  std::vector<std::pair<VertexId, VertexId>> edges_deleted;
};

// Replays the edge-editing bookkeeping for one fixed assignment sequence,
// level by level. After order[k] is mapped to assigned[k], the conditional
// list of every still-unassigned current neighbor un is intersected into
// VC(un); an intersection that leaves VC(un) unchanged proves the edge
// redundant and deletes it. Then the mapped data vertex is struck from all
// unassigned sets, adding an edge to each vertex it was removed from.
//
// ccs(u, v, un) must return the ascending conditional list for candidate v
// of u along the query edge (u, un).
template <typename CcsFn>
std::vector<TraceLevel> dge_trace(std::uint32_t nq,
                                  std::vector<std::pair<VertexId, VertexId>> query_edges,
                                  const CandidateSets& cands, std::span<const VertexId> order,
                                  std::span<const VertexId> assigned, CcsFn&& ccs) {
  std::vector<std::vector<VertexId>> vc(nq);
  for (VertexId u = 0; u < nq; ++u) vc[u] = cands[u];

  auto has_edge = [&](VertexId a, VertexId b) {
    if (a > b) std::swap(a, b);
    return std::find(query_edges.begin(), query_edges.end(), std::make_pair(a, b)) !=
           query_edges.end();
  };
  auto drop_edge = [&](VertexId a, VertexId b) {
    if (a > b) std::swap(a, b);
    query_edges.erase(std::find(query_edges.begin(), query_edges.end(), std::make_pair(a, b)));
  };

  std::vector<bool> placed(nq, false);
  std::vector<TraceLevel> levels;
  std::vector<VertexId> scratch;

  for (std::size_t k = 0; k < order.size(); ++k) {
    VertexId u = order[k];
    VertexId v = assigned[k];
    placed[u] = true;

    TraceLevel level;
    for (VertexId un = 0; un < nq; ++un) {
      if (placed[un] || !has_edge(u, un)) continue;
      intersect_sorted_into(vc[un], ccs(u, v, un), scratch);
      if (scratch.size() == vc[un].size()) {
        level.edges_deleted.emplace_back(u, un);
        drop_edge(u, un);
      }
      vc[un] = scratch;
    }
    for (VertexId uj = 0; uj < nq; ++uj) {
      if (placed[uj]) continue;
      auto it = std::lower_bound(vc[uj].begin(), vc[uj].end(), v);
      if (it != vc[uj].end() && *it == v) {
        vc[uj].erase(it);
        level.edges_added.emplace_back(u, uj);
        query_edges.emplace_back(std::min(u, uj), std::max(u, uj));
      }
    }

    level.vc.resize(nq);
    for (VertexId w = 0; w < nq; ++w)
      if (!placed[w]) level.vc[w] = vc[w];
    levels.push_back(std::move(level));
  }

  return levels;
}

}  // namespace submatch
