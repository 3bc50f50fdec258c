#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "submatch/types.hpp"

namespace submatch {

// Length ratio above which the merge switches to galloping search in the
// longer list.
inline constexpr std::size_t kGallopRatio = 32;

inline bool contains_sorted(std::span<const VertexId> list, VertexId v) {
  return std::binary_search(list.begin(), list.end(), v);
}

namespace detail {

// Linear merge over two ascending lists.
inline void intersect_merge(std::span<const VertexId> a, std::span<const VertexId> b,
                            std::vector<VertexId>& out) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (a[i] > b[j]) {
      ++j;
    } else {
      out.push_back(a[i]);
      ++i;
      ++j;
    }
  }
}

// For each element of the short list, gallop forward in the long list.
inline void intersect_gallop(std::span<const VertexId> small, std::span<const VertexId> large,
                             std::vector<VertexId>& out) {
  std::size_t base = 0;
  for (VertexId v : small) {
    std::size_t step = 1;
    std::size_t hi = base;
    while (hi < large.size() && large[hi] < v) {
      base = hi + 1;
      hi += step;
      step <<= 1;
    }
    hi = std::min(hi, large.size());
    const auto* it = std::lower_bound(large.data() + base, large.data() + hi, v);
    base = static_cast<std::size_t>(it - large.data());
    if (base < large.size() && large[base] == v) {
      out.push_back(v);
      ++base;
    }
  }
}

}  // namespace detail

// Intersection of two ascending lists, appended to `out` (cleared first).
inline void intersect_sorted_into(std::span<const VertexId> a, std::span<const VertexId> b,
                                  std::vector<VertexId>& out) {
  out.clear();
  if (a.empty() || b.empty()) return;
  if (a.size() > b.size()) std::swap(a, b);
  if (b.size() / a.size() > kGallopRatio) {
    detail::intersect_gallop(a, b, out);
  } else {
    detail::intersect_merge(a, b, out);
  }
}

inline std::vector<VertexId> intersect_sorted(std::span<const VertexId> a,
                                              std::span<const VertexId> b) {
  std::vector<VertexId> out;
  intersect_sorted_into(a, b, out);
  return out;
}

}  // namespace submatch
