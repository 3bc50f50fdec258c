#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "submatch/bipartite.hpp"
#include "submatch/graph.hpp"
#include "submatch/types.hpp"

namespace submatch {

struct FilterStats {
  std::uint64_t semi_matching_calls = 0;
  std::uint64_t precheck_hits = 0;
  std::uint64_t removals = 0;
  std::uint32_t rounds = 0;
};

// Observer invoked with the candidate sets after each refinement pass.
using FilterPassObserver = std::function<void(const CandidateSets&)>;

// Label-and-frequency filter: v is a candidate for u when it carries u's
// label and dominates u's neighbor label frequencies. Only vertices of the
// data graph carrying L(u) are examined.
inline CandidateSets nlf_filter(const Graph& q, const Graph& g) {
  CandidateSets cands;
  cands.sets.resize(q.vertex_count());
  std::vector<std::pair<LabelId, std::uint32_t>> wanted;
  for (VertexId u = 0; u < q.vertex_count(); ++u) {
    auto vertex_label = g.dense_label(q.original_label(u));
    if (!vertex_label) continue;

    // Translate u's neighbor label frequencies into g's dense label space.
    wanted.clear();
    bool satisfiable = true;
    for (auto [lq, count] : q.neighbor_label_counts(u)) {
      auto lg = g.dense_label(q.label_value(lq));
      if (!lg) {
        satisfiable = false;
        break;
      }
      wanted.emplace_back(*lg, count);
    }
    if (!satisfiable) continue;

    for (VertexId v : g.vertices_with_label(*vertex_label)) {
      if (g.degree(v) < q.degree(u)) continue;
      bool ok = true;
      for (auto [lg, count] : wanted) {
        if (g.neighbor_label_count(v, lg) < count) {
          ok = false;
          break;
        }
      }
      if (ok) cands.sets[u].push_back(v);
    }
  }
  return cands;
}

namespace detail {

// Membership bitmaps mirroring candidate sets, for O(1) edge tests in the
// bipartite refinement.
struct Membership {
  std::vector<std::vector<bool>> in_set;

  Membership(const Graph& g, const CandidateSets& cands) {
    in_set.assign(cands.size(), std::vector<bool>(g.vertex_count(), false));
    for (VertexId u = 0; u < cands.size(); ++u)
      for (VertexId v : cands[u]) in_set[u][v] = true;
  }

  bool test(VertexId u, VertexId v) const { return in_set[u][v]; }
  void erase(VertexId u, VertexId v) { in_set[u][v] = false; }
};

inline void compact(std::vector<VertexId>& list, const std::vector<bool>& keep) {
  std::size_t w = 0;
  for (VertexId v : list)
    if (keep[v]) list[w++] = v;
  list.resize(w);
}

}  // namespace detail

// Semi-matching refinement to a fixpoint: v survives in C(u) only if the
// bipartite graph between N(u) and N(v), with edges given by current
// candidate membership, has a matching saturating N(u). Full passes over
// all (u, v) pairs repeat until a pass removes nothing.
inline CandidateSets gql_filter(const Graph& q, const Graph& g, const CandidateSets& init,
                                FilterStats* stats = nullptr,
                                const FilterPassObserver& on_pass = {}) {
  CandidateSets cands = init;
  detail::Membership member(g, cands);
  FilterStats local;

  bool changed = true;
  while (changed) {
    changed = false;
    ++local.rounds;
    for (VertexId u = 0; u < q.vertex_count(); ++u) {
      auto left = q.neighbors(u);
      bool removed_from_u = false;
      for (VertexId v : std::vector<VertexId>(cands[u])) {
        auto right = g.neighbors(v);
        ++local.semi_matching_calls;
        auto match = semi_matching(
            left, right, [&](VertexId un, VertexId vn) { return member.test(un, vn); });
        if (!match.saturated) {
          member.erase(u, v);
          ++local.removals;
          removed_from_u = true;
          changed = true;
        }
      }
      if (removed_from_u) detail::compact(cands.sets[u], member.in_set[u]);
    }
    if (on_pass) on_pass(cands);
  }

  if (stats) *stats = local;
  return cands;
}

// Same fixpoint as gql_filter, reached with a work queue and a cached
// assignment per (u, candidate) pair. A cached saturating assignment that
// is still valid under current membership lets the semi-matching call be
// skipped; a stale one seeds the next call.
inline CandidateSets fgql_filter(const Graph& q, const Graph& g, const CandidateSets& init,
                                 FilterStats* stats = nullptr) {
  CandidateSets cands = init;
  detail::Membership member(g, cands);
  FilterStats local;

  const std::uint32_t nq = q.vertex_count();

  // Cache is keyed by (u, rank of v in the initial candidate list).
  std::vector<std::vector<VertexId>> cache(nq);
  std::vector<std::vector<bool>> cached(nq);
  for (VertexId u = 0; u < nq; ++u) {
    cache[u].assign(static_cast<std::size_t>(init[u].size()) * q.degree(u), kInvalidVertex);
    cached[u].assign(init[u].size(), false);
  }
  auto initial_rank = [&](VertexId u, VertexId v) {
    return static_cast<std::size_t>(
        std::lower_bound(init[u].begin(), init[u].end(), v) - init[u].begin());
  };

  std::deque<VertexId> queue;
  std::vector<bool> in_queue(nq, true);
  for (VertexId u = 0; u < nq; ++u) queue.push_back(u);

  while (!queue.empty()) {
    VertexId u = queue.front();
    queue.pop_front();
    in_queue[u] = false;
    ++local.rounds;

    auto left = q.neighbors(u);
    bool removed_from_u = false;
    for (VertexId v : std::vector<VertexId>(cands[u])) {
      std::size_t rank = initial_rank(u, v);
      std::span<VertexId> slot{cache[u].data() + rank * left.size(), left.size()};

      if (cached[u][rank]) {
        bool still_valid = true;
        for (std::size_t i = 0; i < left.size(); ++i) {
          if (!member.test(left[i], slot[i])) {
            still_valid = false;
            break;
          }
        }
        if (still_valid) {
          ++local.precheck_hits;
          continue;
        }
      }

      auto right = g.neighbors(v);
      ++local.semi_matching_calls;
      auto match =
          semi_matching(left, right,
                        [&](VertexId un, VertexId vn) { return member.test(un, vn); },
                        cached[u][rank] ? std::span<const VertexId>(slot) : std::span<const VertexId>{});
      if (match.saturated) {
        std::copy(match.assignment.begin(), match.assignment.end(), slot.begin());
        cached[u][rank] = true;
      } else {
        member.erase(u, v);
        ++local.removals;
        removed_from_u = true;
      }
    }

    if (removed_from_u) {
      detail::compact(cands.sets[u], member.in_set[u]);
      if (!in_queue[u]) {
        queue.push_back(u);
        in_queue[u] = true;
      }
      for (VertexId un : q.neighbors(u)) {
        if (!in_queue[un]) {
          queue.push_back(un);
          in_queue[un] = true;
        }
      }
    }
  }

  if (stats) *stats = local;
  return cands;
}

// Neighborhood-consistency rounds: v survives in C(u) when every query
// neighbor of u still has some candidate adjacent to v. Each round reads
// the sets as they stood at the start of the round.
inline CandidateSets cfl_filter(const Graph& q, const Graph& g, const CandidateSets& init,
                                std::uint32_t rounds = 1) {
  CandidateSets cands = init;
  for (std::uint32_t r = 0; r < rounds; ++r) {
    detail::Membership prev(g, cands);
    CandidateSets next;
    next.sets.resize(cands.size());
    for (VertexId u = 0; u < q.vertex_count(); ++u) {
      for (VertexId v : cands[u]) {
        bool ok = true;
        for (VertexId un : q.neighbors(u)) {
          bool hit = false;
          for (VertexId vn : g.neighbors(v)) {
            if (prev.test(un, vn)) {
              hit = true;
              break;
            }
          }
          if (!hit) {
            ok = false;
            break;
          }
        }
        if (ok) next.sets[u].push_back(v);
      }
    }
    cands = std::move(next);
  }
  return cands;
}

}  // namespace submatch
