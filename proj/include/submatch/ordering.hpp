#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "submatch/graph.hpp"
#include "submatch/types.hpp"

namespace submatch {

struct MatchingOrder {
  // Query vertices by search position.
  std::vector<VertexId> order;
  // Inverse of `order`.
  std::vector<std::uint32_t> position_of;
  // For each position k, the positions j < k whose vertex is adjacent to
  // order[k], ascending.
  std::vector<std::vector<std::uint32_t>> backward_neighbors;

  std::uint32_t size() const { return static_cast<std::uint32_t>(order.size()); }
};

// Greedy ordering: start from a maximum-degree vertex, then repeatedly take
// the unplaced vertex with the most placed neighbors. Ties fall to the
// vertex whose unplaced neighbors see the most placed vertices, then to the
// one with the most unplaced neighbors adjacent to the placed set, then to
// the smallest id.
inline MatchingOrder ri_order(const Graph& q) {
  const std::uint32_t nq = q.vertex_count();
  if (nq == 0) throw std::invalid_argument("query graph is empty");
  if (!q.is_connected()) throw std::invalid_argument("query graph is not connected");

  std::vector<bool> placed(nq, false);
  MatchingOrder result;
  result.order.reserve(nq);

  VertexId root = 0;
  for (VertexId u = 1; u < nq; ++u)
    if (q.degree(u) > q.degree(root)) root = u;
  result.order.push_back(root);
  placed[root] = true;

  std::vector<bool> next_to_placed(nq);
  while (result.order.size() < nq) {
    // Vertices adjacent to the placed prefix.
    std::fill(next_to_placed.begin(), next_to_placed.end(), false);
    for (VertexId p : result.order)
      for (VertexId w : q.neighbors(p)) next_to_placed[w] = true;

    VertexId best = kInvalidVertex;
    std::uint32_t best_placed = 0, best_two_hop = 0, best_frontier = 0;
    for (VertexId u = 0; u < nq; ++u) {
      if (placed[u] || !next_to_placed[u]) continue;

      std::uint32_t placed_neighbors = 0;
      std::uint32_t frontier = 0;
      std::uint32_t two_hop = 0;
      std::vector<bool> seen(nq, false);
      for (VertexId w : q.neighbors(u)) {
        if (placed[w]) {
          ++placed_neighbors;
          continue;
        }
        if (next_to_placed[w]) ++frontier;
        for (VertexId x : q.neighbors(w)) {
          if (placed[x] && !seen[x]) {
            seen[x] = true;
            ++two_hop;
          }
        }
      }

      if (best == kInvalidVertex || placed_neighbors > best_placed ||
          (placed_neighbors == best_placed &&
           (two_hop > best_two_hop ||
            (two_hop == best_two_hop && frontier > best_frontier)))) {
        best = u;
        best_placed = placed_neighbors;
        best_two_hop = two_hop;
        best_frontier = frontier;
      }
    }

    result.order.push_back(best);
    placed[best] = true;
  }

  result.position_of.assign(nq, 0);
  for (std::uint32_t k = 0; k < nq; ++k) result.position_of[result.order[k]] = k;
  result.backward_neighbors.resize(nq);
  for (std::uint32_t k = 0; k < nq; ++k)
    for (std::uint32_t j = 0; j < k; ++j)
      if (q.has_edge(result.order[j], result.order[k]))
        result.backward_neighbors[k].push_back(j);

  return result;
}

}  // namespace submatch
