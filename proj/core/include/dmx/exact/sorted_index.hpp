#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dmx/point_set.hpp"

namespace dmx {

// Per-coordinate ascending orders of the points; ties broken by point index.
struct SortedIndex {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<std::uint32_t> order;  // order[i*n + r]: point at rank r of coordinate i
  std::vector<std::uint32_t> rank;   // rank[i*n + k]: rank of point k in coordinate i
  std::vector<double> sorted;        // sorted[i*n + r] = x_{order[i*n + r]}(i)

  std::span<const std::uint32_t> perm(std::size_t i) const { return {order.data() + i * n, n}; }
  std::span<const std::uint32_t> ranks(std::size_t i) const { return {rank.data() + i * n, n}; }
  std::span<const double> values(std::size_t i) const { return {sorted.data() + i * n, n}; }
};

SortedIndex build_sorted_index(const PointSet& X);

}  // namespace dmx
