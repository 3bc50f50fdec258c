#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "submatch/types.hpp"

namespace submatch {

// Input is malformed at a specific line of the text.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Input parsed but describes an inconsistent graph.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& message) : std::runtime_error(message) {}
};

// Undirected vertex-labeled graph stored as sorted CSR adjacency.
//
// Text format:
//   t <nv> <ne>
//   v <id> <label> <degree>     one line per vertex, ids ascending from 0
//   e <src> <dst>               one line per edge, either orientation
//
// Labels are remapped to a dense internal range; original values are kept
// for serialization and for matching labels across graphs.
class Graph {
 public:
  Graph() = default;

  // Constructs from an edge list. Edges may be given in either orientation;
  // self-loops and duplicates are rejected.
  static Graph build(std::uint32_t vertex_count, std::vector<std::uint32_t> original_labels,
                     std::vector<std::pair<VertexId, VertexId>> edges) {
    if (original_labels.size() != vertex_count)
      throw ValidationError("label count does not match vertex count");
    for (auto& [a, b] : edges) {
      if (a >= vertex_count || b >= vertex_count)
        throw ValidationError("edge endpoint out of range");
      if (a == b) throw ValidationError("self-loop on vertex " + std::to_string(a));
      if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (edges[i] == edges[i - 1])
        throw ValidationError("duplicate edge " + std::to_string(edges[i].first) + "-" +
                              std::to_string(edges[i].second));
    }

    Graph g;
    g.vertex_count_ = vertex_count;
    g.edge_count_ = static_cast<std::uint32_t>(edges.size());
    g.remap_labels(std::move(original_labels));
    g.build_adjacency(edges);
    g.build_label_index();
    g.build_nlf();
    return g;
  }

  static Graph load_text(std::string_view text) {
    std::uint32_t nv = 0, ne = 0;
    std::vector<std::uint32_t> labels;
    std::vector<std::uint32_t> declared_degree;
    std::vector<std::pair<VertexId, VertexId>> edges;

    std::size_t line_no = 0;
    std::size_t seen_vertices = 0, seen_edges = 0;
    bool seen_header = false;

    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      std::string_view line = text.substr(pos, eol - pos);
      pos = eol + 1;
      ++line_no;

      std::vector<std::string_view> tok = split_ws(line);
      if (tok.empty()) continue;

      if (!seen_header) {
        if (tok[0] != "t") throw ParseError(line_no, "expected header line 't <nv> <ne>'");
        if (tok.size() != 3) throw ParseError(line_no, "header needs vertex and edge counts");
        nv = parse_u32(tok[1], line_no);
        ne = parse_u32(tok[2], line_no);
        labels.reserve(nv);
        declared_degree.reserve(nv);
        edges.reserve(ne);
        seen_header = true;
      } else if (tok[0] == "v") {
        if (seen_vertices == nv) throw ParseError(line_no, "more vertex lines than declared");
        if (seen_edges > 0) throw ParseError(line_no, "vertex line after edge lines");
        if (tok.size() != 4) throw ParseError(line_no, "expected 'v <id> <label> <degree>'");
        std::uint32_t id = parse_u32(tok[1], line_no);
        if (id != seen_vertices)
          throw ParseError(line_no, "vertex ids must be ascending from 0, got " +
                                        std::to_string(id));
        labels.push_back(parse_u32(tok[2], line_no));
        declared_degree.push_back(parse_u32(tok[3], line_no));
        ++seen_vertices;
      } else if (tok[0] == "e") {
        if (seen_vertices != nv) throw ParseError(line_no, "edge line before all vertex lines");
        if (seen_edges == ne) throw ParseError(line_no, "more edge lines than declared");
        if (tok.size() != 3) throw ParseError(line_no, "expected 'e <src> <dst>'");
        VertexId a = parse_u32(tok[1], line_no);
        VertexId b = parse_u32(tok[2], line_no);
        if (a >= nv || b >= nv) throw ParseError(line_no, "edge endpoint out of range");
        if (a == b) throw ParseError(line_no, "self-loop on vertex " + std::to_string(a));
        edges.emplace_back(a, b);
        ++seen_edges;
      } else {
        throw ParseError(line_no, "unknown record type '" + std::string(tok[0]) + "'");
      }
    }

    if (!seen_header) throw ParseError(1, "empty input");
    if (seen_vertices != nv)
      throw ParseError(line_no, "declared " + std::to_string(nv) + " vertices, found " +
                                    std::to_string(seen_vertices));
    if (seen_edges != ne)
      throw ParseError(line_no, "declared " + std::to_string(ne) + " edges, found " +
                                    std::to_string(seen_edges));

    Graph g = build(nv, std::move(labels), std::move(edges));
    for (VertexId v = 0; v < nv; ++v) {
      if (g.degree(v) != declared_degree[v])
        throw ValidationError("vertex " + std::to_string(v) + " declares degree " +
                              std::to_string(declared_degree[v]) + " but has " +
                              std::to_string(g.degree(v)));
    }
    return g;
  }

  static Graph load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_text(buf.str());
  }

  // Serializes in canonical form: edges as 'e a b' with a < b, ascending.
  std::string to_text() const {
    std::ostringstream out;
    out << "t " << vertex_count_ << " " << edge_count_ << "\n";
    for (VertexId v = 0; v < vertex_count_; ++v)
      out << "v " << v << " " << original_label(v) << " " << degree(v) << "\n";
    for (VertexId v = 0; v < vertex_count_; ++v)
      for (VertexId w : neighbors(v))
        if (v < w) out << "e " << v << " " << w << "\n";
    return out.str();
  }

  std::uint32_t vertex_count() const { return vertex_count_; }
  std::uint32_t edge_count() const { return edge_count_; }
  std::uint32_t label_count() const { return static_cast<std::uint32_t>(label_values_.size()); }

  LabelId label(VertexId v) const { return labels_[v]; }
  std::uint32_t original_label(VertexId v) const { return label_values_[labels_[v]]; }
  std::uint32_t label_value(LabelId dense) const { return label_values_[dense]; }

  // Dense id of an original label value, if this graph uses it.
  std::optional<LabelId> dense_label(std::uint32_t original) const {
    auto it = std::lower_bound(label_values_.begin(), label_values_.end(), original);
    if (it == label_values_.end() || *it != original) return std::nullopt;
    return static_cast<LabelId>(it - label_values_.begin());
  }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {adjacency_.data() + adj_offsets_[v], adj_offsets_[v + 1] - adj_offsets_[v]};
  }

  std::uint32_t degree(VertexId v) const {
    return static_cast<std::uint32_t>(adj_offsets_[v + 1] - adj_offsets_[v]);
  }

  std::uint32_t max_degree() const {
    std::uint32_t d = 0;
    for (VertexId v = 0; v < vertex_count_; ++v) d = std::max(d, degree(v));
    return d;
  }

  bool has_edge(VertexId a, VertexId b) const {
    auto n = neighbors(a);
    return std::binary_search(n.begin(), n.end(), b);
  }

  // All vertices carrying a dense label, ascending.
  std::span<const VertexId> vertices_with_label(LabelId dense) const {
    return {label_index_.data() + label_offsets_[dense],
            label_offsets_[dense + 1] - label_offsets_[dense]};
  }

  // Neighbor label frequencies of v as (dense label, count), ascending by label.
  std::span<const std::pair<LabelId, std::uint32_t>> neighbor_label_counts(VertexId v) const {
    return {nlf_.data() + nlf_offsets_[v], nlf_offsets_[v + 1] - nlf_offsets_[v]};
  }

  std::uint32_t neighbor_label_count(VertexId v, LabelId dense) const {
    auto row = neighbor_label_counts(v);
    auto it = std::lower_bound(row.begin(), row.end(), dense,
                               [](const auto& p, LabelId l) { return p.first < l; });
    if (it == row.end() || it->first != dense) return 0;
    return it->second;
  }

  bool is_connected() const {
    if (vertex_count_ == 0) return true;
    std::vector<bool> seen(vertex_count_, false);
    std::vector<VertexId> stack = {0};
    seen[0] = true;
    std::uint32_t visited = 1;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (VertexId w : neighbors(v)) {
        if (!seen[w]) {
          seen[w] = true;
          ++visited;
          stack.push_back(w);
        }
      }
    }
    return visited == vertex_count_;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.vertex_count_ == b.vertex_count_ && a.edge_count_ == b.edge_count_ &&
           a.labels_ == b.labels_ && a.label_values_ == b.label_values_ &&
           a.adj_offsets_ == b.adj_offsets_ && a.adjacency_ == b.adjacency_;
  }

 private:
  static std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
      if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
  }

  static std::uint32_t parse_u32(std::string_view tok, std::size_t line_no) {
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw ParseError(line_no, "expected unsigned integer, got '" + std::string(tok) + "'");
    return value;
  }

  void remap_labels(std::vector<std::uint32_t> original) {
    label_values_ = original;
    std::sort(label_values_.begin(), label_values_.end());
    label_values_.erase(std::unique(label_values_.begin(), label_values_.end()),
                        label_values_.end());
    labels_.resize(vertex_count_);
    for (VertexId v = 0; v < vertex_count_; ++v)
      labels_[v] = static_cast<LabelId>(
          std::lower_bound(label_values_.begin(), label_values_.end(), original[v]) -
          label_values_.begin());
  }

  void build_adjacency(const std::vector<std::pair<VertexId, VertexId>>& edges) {
    std::vector<std::uint32_t> deg(vertex_count_, 0);
    for (auto [a, b] : edges) {
      ++deg[a];
      ++deg[b];
    }
    adj_offsets_.assign(vertex_count_ + 1, 0);
    for (VertexId v = 0; v < vertex_count_; ++v) adj_offsets_[v + 1] = adj_offsets_[v] + deg[v];
    adjacency_.resize(adj_offsets_[vertex_count_]);
    std::vector<std::uint32_t> fill(adj_offsets_.begin(), adj_offsets_.end() - 1);
    for (auto [a, b] : edges) {
      adjacency_[fill[a]++] = b;
      adjacency_[fill[b]++] = a;
    }
    for (VertexId v = 0; v < vertex_count_; ++v)
      std::sort(adjacency_.begin() + adj_offsets_[v], adjacency_.begin() + adj_offsets_[v + 1]);
  }

  void build_label_index() {
    std::uint32_t nl = label_count();
    std::vector<std::uint32_t> counts(nl, 0);
    for (VertexId v = 0; v < vertex_count_; ++v) ++counts[labels_[v]];
    label_offsets_.assign(nl + 1, 0);
    for (std::uint32_t l = 0; l < nl; ++l) label_offsets_[l + 1] = label_offsets_[l] + counts[l];
    label_index_.resize(vertex_count_);
    std::vector<std::uint32_t> fill(label_offsets_.begin(), label_offsets_.end() - 1);
    for (VertexId v = 0; v < vertex_count_; ++v) label_index_[fill[labels_[v]]++] = v;
  }

  void build_nlf() {
    nlf_offsets_.assign(vertex_count_ + 1, 0);
    nlf_.clear();
    std::vector<LabelId> scratch;
    for (VertexId v = 0; v < vertex_count_; ++v) {
      scratch.clear();
      for (VertexId w : neighbors(v)) scratch.push_back(labels_[w]);
      std::sort(scratch.begin(), scratch.end());
      std::size_t i = 0;
      while (i < scratch.size()) {
        std::size_t j = i;
        while (j < scratch.size() && scratch[j] == scratch[i]) ++j;
        nlf_.emplace_back(scratch[i], static_cast<std::uint32_t>(j - i));
        i = j;
      }
      nlf_offsets_[v + 1] = static_cast<std::uint32_t>(nlf_.size());
    }
  }

  std::uint32_t vertex_count_ = 0;
  std::uint32_t edge_count_ = 0;
  std::vector<LabelId> labels_;
  std::vector<std::uint32_t> label_values_;
  std::vector<std::uint32_t> adj_offsets_;
  std::vector<VertexId> adjacency_;
  std::vector<std::uint32_t> label_offsets_;
  std::vector<VertexId> label_index_;
  std::vector<std::uint32_t> nlf_offsets_;
  std::vector<std::pair<LabelId, std::uint32_t>> nlf_;
};

}  // namespace submatch
