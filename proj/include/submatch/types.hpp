#pragma once

#include <bitset>
#include <cstdint>
#include <vector>

namespace submatch {

using VertexId = std::uint32_t;
using LabelId = std::uint32_t;

inline constexpr VertexId kInvalidVertex = static_cast<VertexId>(-1);

// Failing-set machinery tracks query vertices in fixed-width bitsets.
inline constexpr std::size_t kMaxQueryVertices = 64;
using QueryBitset = std::bitset<kMaxQueryVertices>;

// Per-query-vertex candidate lists. Each list is strictly ascending.
struct CandidateSets {
  std::vector<std::vector<VertexId>> sets;

  std::size_t size() const { return sets.size(); }
  std::vector<VertexId>& operator[](VertexId u) { return sets[u]; }
  const std::vector<VertexId>& operator[](VertexId u) const { return sets[u]; }

  bool any_empty() const {
    for (const auto& s : sets)
      if (s.empty()) return true;
    return false;
  }

  std::uint64_t total_candidates() const {
    std::uint64_t n = 0;
    for (const auto& s : sets) n += s.size();
    return n;
  }

  // Mean candidate-list length over query vertices.
  double average_candidates() const {
    if (sets.empty()) return 0.0;
    return static_cast<double>(total_candidates()) / static_cast<double>(sets.size());
  }
};

}  // namespace submatch
