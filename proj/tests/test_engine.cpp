#include "submatch/engine.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <random>
#include <stdexcept>
#include <vector>

#include "submatch/dge_trace.hpp"
#include "submatch/filtering.hpp"
#include "submatch/oracle.hpp"
#include "testutil.hpp"

namespace submatch {
namespace {

using testutil::make_graph;
using testutil::sorted_embeddings;
using V = std::vector<VertexId>;
using VV = std::vector<std::vector<VertexId>>;

struct Prepared {
  CandidateSets cands;
  EdgeCandidateIndex idx;
  MatchingOrder order;
};

Prepared prepare(const Graph& q, const Graph& g) {
  Prepared p;
  p.cands = nlf_filter(q, g);
  p.idx = build_ccs(q, g, p.cands);
  p.order = ri_order(q);
  return p;
}

struct EngineRuns {
  EnumerationResult baseline, failing_set, dgee;
};

EngineRuns run_all(const Graph& q, const Graph& g, const SearchLimits& limits = {}) {
  Prepared p = prepare(q, g);
  EngineRuns r;
  r.baseline = collect(enumerate_baseline, p.idx, p.order, p.cands, limits);
  r.failing_set = collect(enumerate_failing_set, p.idx, p.order, p.cands, limits);
  r.dgee = collect(enumerate_dgee, p.idx, p.order, p.cands, limits);
  return r;
}

TEST(Engines, TriangleOnTriangleExactCounts) {
  Graph q = make_graph(3, {5, 5, 5}, {{0, 1}, {1, 2}, {0, 2}});
  EngineRuns r = run_all(q, q);

  VV expected = sorted_embeddings(oracle_enumerate(q, q));
  EXPECT_EQ(expected.size(), 6u);
  for (const auto* res : {&r.baseline, &r.failing_set, &r.dgee}) {
    EXPECT_EQ(sorted_embeddings(res->embeddings), expected);
    EXPECT_EQ(res->stats.embeddings_found, 6u);
    EXPECT_EQ(res->stats.search_nodes, 15u);
    EXPECT_EQ(res->stats.status, SearchStatus::kSolved);
  }

  // Lookup engines intersect once per expanded level-2 node (3 roots, two
  // lists each). The editing engine narrows both open neighbors at the root
  // (3 x 2) and the last one at level 1 (6 x 1).
  EXPECT_EQ(r.baseline.stats.intersections, 6u);
  EXPECT_EQ(r.failing_set.stats.intersections, 6u);
  EXPECT_EQ(r.dgee.stats.intersections, 12u);
}

TEST(Engines, InjectivityOnSingleLabelPath) {
  Graph q = make_graph(3, {1, 1, 1}, {{0, 1}, {1, 2}});
  Graph g = make_graph(3, {1, 1, 1}, {{0, 1}, {1, 2}});
  EngineRuns r = run_all(q, g);

  VV expected = {{0, 1, 2}, {2, 1, 0}};
  for (const auto* res : {&r.baseline, &r.failing_set, &r.dgee}) {
    EXPECT_EQ(sorted_embeddings(res->embeddings), expected);
    EXPECT_EQ(res->stats.search_nodes, 5u);
  }
}

TEST(Engines, SingleEdgeInShortPath) {
  Graph q = make_graph(2, {1, 1}, {{0, 1}});
  Graph g = make_graph(3, {1, 1, 1}, {{0, 1}, {1, 2}});
  EngineRuns r = run_all(q, g);
  VV expected = {{0, 1}, {1, 0}, {1, 2}, {2, 1}};
  for (const auto* res : {&r.baseline, &r.failing_set, &r.dgee})
    EXPECT_EQ(sorted_embeddings(res->embeddings), expected);
}

TEST(Engines, SingleVertexQuery) {
  Graph q = make_graph(1, {3}, {});
  Graph g = make_graph(4, {3, 1, 3, 3}, {{0, 1}, {1, 2}, {2, 3}});
  EngineRuns r = run_all(q, g);
  VV expected = {{0}, {2}, {3}};
  for (const auto* res : {&r.baseline, &r.failing_set, &r.dgee}) {
    EXPECT_EQ(sorted_embeddings(res->embeddings), expected);
    EXPECT_EQ(res->stats.search_nodes, 3u);
  }
}

TEST(Engines, EmptyCandidateSetsSolveToZero) {
  Graph q = make_graph(2, {1, 9}, {{0, 1}});
  Graph g = make_graph(2, {1, 2}, {{0, 1}});
  Prepared p = prepare(q, g);
  ASSERT_TRUE(p.cands.any_empty());
  auto res = collect(enumerate_baseline, p.idx, p.order, p.cands);
  EXPECT_EQ(res.stats.embeddings_found, 0u);
  EXPECT_EQ(res.stats.search_nodes, 0u);
  EXPECT_EQ(res.stats.status, SearchStatus::kSolved);
}

// One query shaped as two constraint groups hanging off a shared root: a
// rectangle u1, u2 that always closes, and a pair u3, u4 that only closes
// for one root choice. Three decoy root blocks give the pair no way to
// finish, which the failing-set engines discover after a single probe of
// the rectangle side; the baseline regrinds it for every rectangle filling.
struct BackjumpFixture {
  // u0: label 0; u1: 1, u2: 2 (first group); u3: 3, u4: 4 (second group).
  Graph q = make_graph(5, {0, 1, 2, 3, 4},
                       {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {0, 4}, {3, 4}});

  Graph data() const {
    std::vector<std::uint32_t> labels;
    std::vector<std::pair<VertexId, VertexId>> edges;
    auto add = [&](std::uint32_t label) {
      labels.push_back(label);
      return static_cast<VertexId>(labels.size() - 1);
    };

    auto block = [&](bool closes) {
      VertexId root = add(0);
      V as, bs, cs, ds;
      for (int i = 0; i < 3; ++i) as.push_back(add(1));
      for (int i = 0; i < 3; ++i) bs.push_back(add(2));
      for (int i = 0; i < 2; ++i) cs.push_back(add(3));
      for (int i = 0; i < 2; ++i) ds.push_back(add(4));
      for (VertexId v : as) edges.emplace_back(root, v);
      for (VertexId v : bs) edges.emplace_back(root, v);
      for (VertexId v : cs) edges.emplace_back(root, v);
      for (VertexId v : ds) edges.emplace_back(root, v);
      for (VertexId a : as)
        for (VertexId b : bs) edges.emplace_back(a, b);
      if (closes) {
        for (VertexId c : cs)
          for (VertexId d : ds) edges.emplace_back(c, d);
      } else {
        // Pendants keep the label-frequency filter satisfied while the
        // pair still cannot close inside the block.
        for (VertexId c : cs) edges.emplace_back(c, add(4));
        for (VertexId d : ds) edges.emplace_back(d, add(3));
      }
    };

    block(true);
    for (int i = 0; i < 3; ++i) block(false);
    auto n = static_cast<std::uint32_t>(labels.size());
    return Graph::build(n, std::move(labels), std::move(edges));
  }
};

TEST(Engines, FailingSetsBackjumpPastIrrelevantLevels) {
  BackjumpFixture fx;
  Graph g = fx.data();
  ASSERT_EQ(ri_order(fx.q).order, (V{0, 1, 2, 3, 4}));

  EngineRuns r = run_all(fx.q, g);
  VV expected = sorted_embeddings(oracle_enumerate(fx.q, g));
  EXPECT_EQ(expected.size(), 36u);

  for (const auto* res : {&r.baseline, &r.failing_set, &r.dgee})
    EXPECT_EQ(sorted_embeddings(res->embeddings), expected);

  // Decoy block, baseline: 1 root + 3 rectangle fillings times (1 + 3 + 2)
  // nodes each. Backjumping: 1 root + one probe costing 4 nodes.
  EXPECT_EQ(r.baseline.stats.search_nodes, 160u);
  EXPECT_EQ(r.failing_set.stats.search_nodes, 82u);
  EXPECT_EQ(r.dgee.stats.search_nodes, 82u);
}

// Shrunk from a differential fuzz run. A sibling that contained an embedding
// and a later sibling that backjumped share a parent level; if the backjump
// attribution overwrites the parent's accumulated failing set instead of
// joining it, the match marker is lost and the second embedding with it.
TEST(Engines, BackjumpKeepsMatchMarkerFromEarlierSibling) {
  Graph q = make_graph(6, {2, 2, 0, 1, 2, 1}, {{0, 1}, {0, 2}, {1, 3}, {2, 4}, {2, 5}});
  Graph g = make_graph(6, {1, 1, 2, 0, 2, 2},
                       {{0, 5}, {1, 3}, {1, 5}, {2, 3}, {2, 5}, {3, 4}, {4, 5}});

  VV expected = {{2, 5, 3, 0, 4, 1}, {4, 5, 3, 0, 2, 1}};
  ASSERT_EQ(sorted_embeddings(oracle_enumerate(q, g)), expected);

  EngineRuns r = run_all(q, g);
  for (const auto* res : {&r.baseline, &r.failing_set, &r.dgee})
    EXPECT_EQ(sorted_embeddings(res->embeddings), expected);
}

// Also shrunk from fuzzing. Here the lost information is a conflict
// attribution: an earlier candidate at the same level failed because of a
// vertex mapped higher up, and a later candidate's backjump must not erase
// that record while the level keeps iterating, or an ancestor backjumps
// past the assignment that would have resolved the conflict.
TEST(Engines, BackjumpKeepsConflictAttributionFromEarlierSibling) {
  Graph q = make_graph(6, {0, 0, 0, 0, 0, 0},
                       {{0, 1}, {0, 2}, {0, 4}, {0, 5}, {1, 4}, {2, 3}, {2, 5}, {3, 4}});
  Graph g = make_graph(6, {0, 0, 0, 0, 0, 0},
                       {{0, 1}, {0, 2}, {0, 3}, {0, 5}, {1, 4}, {2, 4}, {2, 5}, {3, 5}, {4, 5}});

  VV expected = sorted_embeddings(oracle_enumerate(q, g));
  ASSERT_EQ(expected.size(), 2u);

  EngineRuns r = run_all(q, g);
  for (const auto* res : {&r.baseline, &r.failing_set, &r.dgee})
    EXPECT_EQ(sorted_embeddings(res->embeddings), expected);
}

TEST(Engines, MatchCapStopsExactly) {
  Graph q = make_graph(3, {1, 1, 1}, {{0, 1}, {1, 2}, {0, 2}});
  Graph g = testutil::make_graph(5, {1, 1, 1, 1, 1},
                                 {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4},
                                  {2, 3}, {2, 4}, {3, 4}});
  SearchLimits limits;
  limits.max_matches = 10;
  EngineRuns r = run_all(q, g, limits);
  for (const auto* res : {&r.baseline, &r.failing_set, &r.dgee}) {
    EXPECT_EQ(res->stats.embeddings_found, 10u);
    EXPECT_EQ(res->embeddings.size(), 10u);
    EXPECT_EQ(res->stats.status, SearchStatus::kMatchCap);
  }
}

TEST(Engines, CapReachedOnFinalEmbeddingStillReportsCap) {
  Graph q = make_graph(2, {1, 1}, {{0, 1}});
  Graph g = make_graph(3, {1, 1, 1}, {{0, 1}, {1, 2}});
  SearchLimits limits;
  limits.max_matches = 4;
  auto res = collect(enumerate_dgee, prepare(q, g).idx, ri_order(q), nlf_filter(q, g), limits);
  EXPECT_EQ(res.stats.embeddings_found, 4u);
  EXPECT_EQ(res.stats.status, SearchStatus::kMatchCap);
}

// Single-label edge query against a complete graph: big enough that the
// search crosses the poll interval, small enough to finish instantly.
Graph complete_single_label(std::uint32_t n) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = a + 1; b < n; ++b) edges.emplace_back(a, b);
  return Graph::build(n, std::vector<std::uint32_t>(n, 1), std::move(edges));
}

TEST(Engines, ExpiredDeadlineStopsAtFirstPoll) {
  Graph q = make_graph(2, {1, 1}, {{0, 1}});
  Graph g = complete_single_label(100);
  SearchLimits limits;
  limits.deadline = std::chrono::steady_clock::now() - std::chrono::milliseconds(1);

  for (auto* enumerate : {+enumerate_baseline, +enumerate_failing_set, +enumerate_dgee}) {
    Prepared p = prepare(q, g);
    auto res = collect(enumerate, p.idx, p.order, p.cands, limits);
    EXPECT_EQ(res.stats.status, SearchStatus::kTimeout);
    EXPECT_EQ(res.stats.search_nodes, kCheckInterval);
    EXPECT_LT(res.stats.embeddings_found, 9900u);
  }
}

TEST(Engines, CancellationReportsTimeout) {
  Graph q = make_graph(2, {1, 1}, {{0, 1}});
  Graph g = complete_single_label(100);
  std::atomic<bool> cancel{true};
  SearchLimits limits;
  limits.cancel = &cancel;

  Prepared p = prepare(q, g);
  auto res = collect(enumerate_dgee, p.idx, p.order, p.cands, limits);
  EXPECT_EQ(res.stats.status, SearchStatus::kTimeout);
  EXPECT_EQ(res.stats.search_nodes, kCheckInterval);
}

TEST(Engines, GenerousDeadlineSolvesCompletely) {
  Graph q = make_graph(2, {1, 1}, {{0, 1}});
  Graph g = complete_single_label(100);
  EngineRuns r = run_all(q, g);
  for (const auto* res : {&r.baseline, &r.failing_set, &r.dgee}) {
    EXPECT_EQ(res->stats.embeddings_found, 9900u);
    EXPECT_EQ(res->stats.search_nodes, 10000u);
    EXPECT_EQ(res->stats.status, SearchStatus::kSolved);
  }
}

TEST(Engines, BitsetEnginesRejectOversizeQueries) {
  const std::uint32_t n = kMaxQueryVertices + 1;
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  Graph path = Graph::build(n, std::vector<std::uint32_t>(n, 1), edges);

  Prepared p = prepare(path, path);
  EXPECT_THROW(collect(enumerate_failing_set, p.idx, p.order, p.cands), std::invalid_argument);
  EXPECT_THROW(collect(enumerate_dgee, p.idx, p.order, p.cands), std::invalid_argument);

  auto res = collect(enumerate_baseline, p.idx, p.order, p.cands);
  EXPECT_EQ(res.stats.embeddings_found, 2u);
}

TEST(Engines, SinkReceivesMappingByQueryVertex) {
  Graph q = make_graph(3, {1, 2, 3}, {{0, 1}, {1, 2}});
  Graph g = make_graph(3, {3, 2, 1}, {{0, 1}, {1, 2}});
  Prepared p = prepare(q, g);
  ASSERT_NE(p.order.order[0], 0u);  // order differs from query id order

  VV seen;
  enumerate_dgee(p.idx, p.order, p.cands, {},
                 [&](std::span<const VertexId> m) { seen.emplace_back(m.begin(), m.end()); });
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(seen[0], (V{2, 1, 0}));
}

TEST(Engines, ComputeVcMatchesManualNarrowing) {
  Graph q = make_graph(3, {5, 5, 5}, {{0, 1}, {1, 2}, {0, 2}});
  Prepared p = prepare(q, q);

  EXPECT_EQ(compute_vc(p.idx, p.order, {}, 0), p.cands[p.order.order[0]]);

  V assigned = {0};
  std::uint64_t intersections = 0;
  EXPECT_EQ(compute_vc(p.idx, p.order, assigned, 1, &intersections), (V{1, 2}));
  EXPECT_EQ(intersections, 0u);

  V assigned2 = {0, 1};
  EXPECT_EQ(compute_vc(p.idx, p.order, assigned2, 2, &intersections), (V{2}));
  EXPECT_EQ(intersections, 1u);
}

TEST(Engines, AgreeWithReferenceOnRandomInstances) {
  std::mt19937 rng(131);
  for (int trial = 0; trial < 40; ++trial) {
    Graph g = testutil::random_graph(rng, 12 + rng() % 14, 0.3, 1 + rng() % 3);
    Graph q;
    if (trial % 2) {
      try {
        q = testutil::extract_subgraph(rng, g, 3 + rng() % 4);
      } catch (const std::runtime_error&) {
        continue;
      }
    } else {
      q = testutil::random_connected_graph(rng, 3 + rng() % 4, 0.4, 1 + rng() % 3);
    }

    CandidateSets cands = fgql_filter(q, g, nlf_filter(q, g));
    VV expected = sorted_embeddings(oracle_enumerate(q, g));
    if (cands.any_empty()) {
      EXPECT_TRUE(expected.empty()) << "trial " << trial;
      continue;
    }

    EdgeCandidateIndex idx = build_ccs(q, g, cands);
    MatchingOrder order = ri_order(q);
    for (auto* enumerate : {+enumerate_baseline, +enumerate_failing_set, +enumerate_dgee}) {
      auto res = collect(enumerate, idx, order, cands);
      EXPECT_EQ(sorted_embeddings(res.embeddings), expected) << "trial " << trial;
      for (const auto& m : res.embeddings)
        EXPECT_TRUE(testutil::valid_embedding(q, g, m));
    }
  }
}

TEST(Engines, PruningNeverExpandsTheSearchTree) {
  // Backjumping only ever skips candidates the plain search would have
  // tried, so per instance both pruned engines stay at or below the
  // baseline. Between the two pruned engines only the aggregate is
  // meaningful: their failing sets differ per node, so individual
  // instances can go either way.
  std::mt19937 rng(139);
  std::uint64_t total_fs = 0, total_dgee = 0;
  for (int trial = 0; trial < 25; ++trial) {
    Graph g = testutil::random_graph(rng, 20 + rng() % 10, 0.35, 1 + rng() % 2);
    Graph q;
    try {
      q = testutil::extract_subgraph(rng, g, 4 + rng() % 3);
    } catch (const std::runtime_error&) {
      continue;
    }
    EngineRuns r = run_all(q, g);
    EXPECT_LE(r.failing_set.stats.search_nodes, r.baseline.stats.search_nodes);
    EXPECT_LE(r.dgee.stats.search_nodes, r.baseline.stats.search_nodes);
    total_fs += r.failing_set.stats.search_nodes;
    total_dgee += r.dgee.stats.search_nodes;
  }
  EXPECT_LE(total_dgee, total_fs);
}

TEST(DgeTrace, SingleEdgeBookkeeping) {
  CandidateSets c;
  c.sets = {{0, 1}, {0, 1}};
  auto ccs = [](VertexId, VertexId v, VertexId) { return v == 0 ? V{1} : V{0}; };
  auto levels = dge_trace(2, {{0, 1}}, c, V{0, 1}, V{0, 1}, ccs);

  ASSERT_EQ(levels.size(), 2u);
  EXPECT_EQ(levels[0].vc[1], (V{1}));
  EXPECT_TRUE(levels[0].edges_added.empty());
  EXPECT_TRUE(levels[0].edges_deleted.empty());
  EXPECT_TRUE(levels[1].edges_added.empty());
  EXPECT_TRUE(levels[1].edges_deleted.empty());
}

TEST(DgeTrace, UnchangedIntersectionDeletesEdge) {
  // VC(u1) is already inside the conditional list, so the edge is redundant
  // and gets deleted; mapping u0 to 0 then strikes 0 from VC(u1), which
  // records an added edge.
  CandidateSets c;
  c.sets = {{0, 1}, {0, 2}, {2, 3}};
  auto ccs = [](VertexId un, VertexId v, VertexId u) -> V {
    if (un == 0 && u == 1) return v == 0 ? V{0, 2, 5} : V{2};
    if (un == 1 && u == 2) return v == 2 ? V{2, 3} : V{3};
    return {};
  };
  auto levels = dge_trace(3, {{0, 1}, {1, 2}}, c, V{0, 1, 2}, V{0, 2, 3}, ccs);

  ASSERT_EQ(levels.size(), 3u);
  EXPECT_EQ(levels[0].edges_deleted,
            (std::vector<std::pair<VertexId, VertexId>>{{0, 1}}));
  EXPECT_EQ(levels[0].edges_added,
            (std::vector<std::pair<VertexId, VertexId>>{{0, 1}}));
  EXPECT_EQ(levels[0].vc[1], (V{2}));
  EXPECT_EQ(levels[0].vc[2], (V{2, 3}));

  // Level 1 maps u1 to 2: the 1-2 intersection leaves {2, 3} unchanged, so
  // that edge is deleted too; striking vertex 2 adds it back.
  EXPECT_EQ(levels[1].edges_deleted,
            (std::vector<std::pair<VertexId, VertexId>>{{1, 2}}));
  EXPECT_EQ(levels[1].edges_added,
            (std::vector<std::pair<VertexId, VertexId>>{{1, 2}}));
  EXPECT_EQ(levels[1].vc[2], (V{3}));
}

}  // namespace
}  // namespace submatch
