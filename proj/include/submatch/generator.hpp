#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "submatch/graph.hpp"
#include "submatch/types.hpp"

namespace submatch {

namespace detail {

inline std::uint64_t rand_below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

inline bool rand_chance(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

template <typename T>
void shuffle_list(std::mt19937_64& rng, std::vector<T>& list) {
  for (std::size_t i = list.size(); i > 1; --i)
    std::swap(list[i - 1], list[rand_below(rng, i)]);
}

}  // namespace detail

// Erdos-Renyi graph with uniformly random labels. May be disconnected.
inline Graph gen_data_graph(std::mt19937_64& rng, std::uint32_t n, double density,
                            std::uint32_t label_count) {
  if (density < 0.0 || density > 1.0) throw std::invalid_argument("density must be in [0, 1]");
  if (label_count == 0) throw std::invalid_argument("need at least one label");
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = a + 1; b < n; ++b)
      if (detail::rand_chance(rng, density)) edges.emplace_back(a, b);
  std::vector<std::uint32_t> labels(n);
  for (auto& l : labels) l = static_cast<std::uint32_t>(detail::rand_below(rng, label_count));
  return Graph::build(n, std::move(labels), std::move(edges));
}

// Connected induced subgraph of `g` with `size` vertices, grown from a
// random start by repeatedly absorbing a random frontier vertex. The
// identity mapping embeds the result back into `g`.
inline Graph extract_query(std::mt19937_64& rng, const Graph& g, std::uint32_t size) {
  if (size == 0 || size > g.vertex_count())
    throw std::invalid_argument("cannot extract " + std::to_string(size) + " of " +
                                std::to_string(g.vertex_count()) + " vertices");

  constexpr int kAttempts = 200;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    VertexId start = static_cast<VertexId>(detail::rand_below(rng, g.vertex_count()));
    std::vector<VertexId> chosen = {start};
    std::vector<bool> in_chosen(g.vertex_count(), false);
    in_chosen[start] = true;
    std::vector<VertexId> frontier(g.neighbors(start).begin(), g.neighbors(start).end());

    while (chosen.size() < size && !frontier.empty()) {
      std::size_t pick = detail::rand_below(rng, frontier.size());
      VertexId v = frontier[pick];
      frontier[pick] = frontier.back();
      frontier.pop_back();
      if (in_chosen[v]) continue;
      in_chosen[v] = true;
      chosen.push_back(v);
      for (VertexId w : g.neighbors(v))
        if (!in_chosen[w]) frontier.push_back(w);
    }
    if (chosen.size() < size) continue;

    std::sort(chosen.begin(), chosen.end());
    std::vector<std::uint32_t> new_id(g.vertex_count());
    for (std::uint32_t i = 0; i < chosen.size(); ++i) new_id[chosen[i]] = i;
    std::vector<std::uint32_t> labels(chosen.size());
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (std::uint32_t i = 0; i < chosen.size(); ++i) {
      labels[i] = g.original_label(chosen[i]);
      for (VertexId w : g.neighbors(chosen[i]))
        if (in_chosen[w] && chosen[i] < w) edges.emplace_back(i, new_id[w]);
    }
    return Graph::build(static_cast<std::uint32_t>(chosen.size()), std::move(labels),
                        std::move(edges));
  }
  throw std::runtime_error("no connected subgraph of the requested size found");
}

// Connected random graph with an exact edge count: a random attachment tree
// plus uniformly chosen extra pairs.
inline Graph gen_connected_query(std::mt19937_64& rng, std::uint32_t n, std::uint32_t edge_count,
                                 std::uint32_t label_count) {
  if (n == 0) throw std::invalid_argument("query needs at least one vertex");
  if (label_count == 0) throw std::invalid_argument("need at least one label");
  std::uint64_t max_edges = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (n == 1 && edge_count > 0)
    throw std::invalid_argument("a single vertex admits no edges");
  if (n > 1 && (edge_count < n - 1 || edge_count > max_edges))
    throw std::invalid_argument("edge count " + std::to_string(edge_count) +
                                " cannot make a connected graph on " + std::to_string(n) +
                                " vertices");

  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
  for (VertexId v = 1; v < n; ++v) {
    VertexId w = static_cast<VertexId>(detail::rand_below(rng, v));
    edges.emplace_back(w, v);
    present[w][v] = present[v][w] = true;
  }
  std::vector<std::pair<VertexId, VertexId>> spare;
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = a + 1; b < n; ++b)
      if (!present[a][b]) spare.emplace_back(a, b);
  detail::shuffle_list(rng, spare);
  for (std::size_t i = 0; n > 1 && i < edge_count - (n - 1); ++i) edges.push_back(spare[i]);

  std::vector<std::uint32_t> labels(n);
  for (auto& l : labels) l = static_cast<std::uint32_t>(detail::rand_below(rng, label_count));
  return Graph::build(n, std::move(labels), std::move(edges));
}

enum class QueryMode { kExtract, kIndependent };

struct GenParams {
  std::uint64_t seed = 1;
  std::uint32_t data_vertices = 100;
  double data_density = 0.1;
  std::uint32_t label_count = 4;
  std::uint32_t query_count = 10;
  std::uint32_t query_size = 8;
  // Used by independent mode only; extract mode inherits whatever density
  // the sampled subgraph has.
  double query_density = 0.3;
  QueryMode mode = QueryMode::kExtract;
};

// Writes data.graph plus `query_count` query files into `out_dir` and
// returns the paths, data graph first. Query files are named
// <size><S|D>_<index>.graph where D marks an average degree of 3 or more.
inline std::vector<std::filesystem::path> gen_instances(const std::filesystem::path& out_dir,
                                                        const GenParams& params) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::mt19937_64 rng(params.seed);

  auto write = [](const fs::path& path, const Graph& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << g.to_text();
  };

  std::vector<fs::path> files;
  Graph data = gen_data_graph(rng, params.data_vertices, params.data_density, params.label_count);
  files.push_back(out_dir / "data.graph");
  write(files.back(), data);

  for (std::uint32_t i = 0; i < params.query_count; ++i) {
    Graph query;
    if (params.mode == QueryMode::kExtract) {
      query = extract_query(rng, data, params.query_size);
    } else {
      std::uint64_t max_edges =
          static_cast<std::uint64_t>(params.query_size) * (params.query_size - 1) / 2;
      auto edges = static_cast<std::uint32_t>(params.query_density * max_edges + 0.5);
      edges = std::max(edges, params.query_size - 1);
      query = gen_connected_query(rng, params.query_size, edges, params.label_count);
    }
    double avg_degree =
        query.vertex_count() ? 2.0 * query.edge_count() / query.vertex_count() : 0.0;
    char name[32];
    std::snprintf(name, sizeof name, "%u%c_%03u.graph", query.vertex_count(),
                  avg_degree >= 3.0 ? 'D' : 'S', i + 1);
    files.push_back(out_dir / name);
    write(files.back(), query);
  }
  return files;
}

}  // namespace submatch
