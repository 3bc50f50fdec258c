#pragma once

#include <cstdint>
#include <vector>

#include "submatch/graph.hpp"
#include "submatch/types.hpp"

namespace submatch {

// Reference enumerator, independent of the filtering and search machinery.
// Assigns query vertices in ascending id order, tries data vertices in
// ascending id order, and checks labels, injectivity and edges directly
// against an adjacency matrix. Output is lexicographic and duplicate-free.
// Stops after `cap` embeddings.
inline std::vector<std::vector<VertexId>> oracle_enumerate(const Graph& q, const Graph& g,
                                                           std::uint64_t cap = 100000) {
  const std::uint32_t nq = q.vertex_count();
  const std::uint32_t ng = g.vertex_count();
  std::vector<std::vector<VertexId>> results;
  if (nq == 0 || cap == 0) return results;

  std::vector<bool> adjacent(static_cast<std::size_t>(ng) * ng, false);
  for (VertexId v = 0; v < ng; ++v)
    for (VertexId w : g.neighbors(v)) adjacent[static_cast<std::size_t>(v) * ng + w] = true;

  std::vector<VertexId> mapping(nq, kInvalidVertex);
  std::vector<bool> used(ng, false);

  auto extend = [&](auto&& self, VertexId u) -> bool {
    if (u == nq) {
      results.push_back(mapping);
      return results.size() >= cap;
    }
    for (VertexId v = 0; v < ng; ++v) {
      if (used[v]) continue;
      if (g.original_label(v) != q.original_label(u)) continue;
      bool edges_ok = true;
      for (VertexId up = 0; up < u; ++up) {
        if (q.has_edge(up, u) &&
            !adjacent[static_cast<std::size_t>(mapping[up]) * ng + v]) {
          edges_ok = false;
          break;
        }
      }
      if (!edges_ok) continue;
      mapping[u] = v;
      used[v] = true;
      bool done = self(self, u + 1);
      used[v] = false;
      mapping[u] = kInvalidVertex;
      if (done) return true;
    }
    return false;
  };

  extend(extend, 0);
  return results;
}

}  // namespace submatch
