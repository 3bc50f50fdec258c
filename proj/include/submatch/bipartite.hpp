#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "submatch/types.hpp"

namespace submatch {

struct SemiMatchResult {
  bool saturated = false;
  // Right-side value matched to each left position; meaningful when saturated.
  std::vector<VertexId> assignment;
};

// Left-saturating bipartite matching via augmenting paths. edge_test(l, r)
// decides adjacency between a left value and a right value; it must be
// stable for the duration of the call. `seed` optionally proposes a prior
// assignment (one right value per left position) that is re-validated
// before use.
template <typename EdgeTest>
SemiMatchResult semi_matching(std::span<const VertexId> left, std::span<const VertexId> right,
                              EdgeTest&& edge_test, std::span<const VertexId> seed = {}) {
  const std::size_t nl = left.size();
  const std::size_t nr = right.size();
  SemiMatchResult result;
  result.assignment.assign(nl, kInvalidVertex);
  if (nl == 0) {
    result.saturated = true;
    return result;
  }
  if (nr < nl) return result;

  // match_right[j] = left position matched to right[j], or npos.
  constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  std::vector<std::size_t> match_right(nr, kFree);
  std::vector<std::size_t> match_left(nl, kFree);

  if (seed.size() == nl) {
    for (std::size_t i = 0; i < nl; ++i) {
      VertexId v = seed[i];
      if (v == kInvalidVertex) continue;
      auto it = std::lower_bound(right.begin(), right.end(), v);
      if (it == right.end() || *it != v) continue;
      std::size_t j = static_cast<std::size_t>(it - right.begin());
      if (match_right[j] != kFree) continue;
      if (!edge_test(left[i], right[j])) continue;
      match_right[j] = i;
      match_left[i] = j;
    }
  }

  std::vector<bool> visited(nr);
  // Iterative DFS over alternating paths, one augmentation per left vertex.
  struct Frame {
    std::size_t li;
    std::size_t rj;
  };
  std::vector<Frame> path;

  auto augment = [&](std::size_t start) -> bool {
    std::fill(visited.begin(), visited.end(), false);
    path.clear();
    path.push_back({start, 0});
    while (!path.empty()) {
      auto& [li, rj] = path.back();
      bool advanced = false;
      for (; rj < nr; ++rj) {
        if (visited[rj]) continue;
        if (!edge_test(left[li], right[rj])) continue;
        visited[rj] = true;
        if (match_right[rj] == kFree) {
          // Augment along the stored path.
          std::size_t give = rj;
          for (std::size_t d = path.size(); d-- > 0;) {
            std::size_t l = path[d].li;
            std::size_t prev = match_left[l];
            match_left[l] = give;
            match_right[give] = l;
            give = prev;
          }
          return true;
        }
        std::size_t next_left = match_right[rj];
        ++rj;
        path.push_back({next_left, 0});
        advanced = true;
        break;
      }
      if (!advanced) path.pop_back();
    }
    return false;
  };

  for (std::size_t i = 0; i < nl; ++i) {
    if (match_left[i] != kFree) continue;
    if (!augment(i)) return result;
  }

  result.saturated = true;
  for (std::size_t i = 0; i < nl; ++i) result.assignment[i] = right[match_left[i]];
  return result;
}

}  // namespace submatch
