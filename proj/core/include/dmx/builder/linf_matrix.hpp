#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dmx/distance_matrix.hpp"
#include "dmx/point_set.hpp"

namespace dmx {

enum class LinfMode { exact, approx };

// One threshold test "||x - y||_inf > j": sum_c (x_c - y_c)^p > d j^p with
// p the smallest even power for which d j^p < (j + 1)^p.
struct LinfLevel {
  std::int64_t j = 0;
  int p = 0;
  std::int64_t threshold = 0;  // d j^p
};

// Levels for an alphabet [0, M]: j = 0..M-1 in exact mode, g - 1 for g on the
// grid g_0 = 1, g_{m+1} = max(g_m + 1, floor(g_m (1 + eps))) in approx mode.
std::vector<LinfLevel> linf_level_plan(std::size_t d, std::int64_t M, LinfMode mode, double eps = 0.25);

DistanceMatrix linf_matrix_bounded(const PointSet& X, LinfMode mode, double eps = 0.25);

}  // namespace dmx
