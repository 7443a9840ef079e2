#pragma once

#include <cstddef>

#include "dmx/point_set.hpp"

namespace dmx::cli {

// Orthogonal vectors through l_inf sums. Rows of A go through f (0 -> 1/2,
// 1 -> 0), rows of B through g (0 -> 1/2, 1 -> 1); then every cross distance
// is 1/2 for an orthogonal pair and 1 otherwise. The cross sum is recovered
// from three all-ones products: (s(A u B) - s(A) - s(B)) / 2.
struct OvpVerdict {
  bool orthogonal_pair = false;
  double cross_sum = 0.0;  // sum over a in A, b in B of ||f(a) - g(b)||_inf
  double pairs = 0.0;      // |A| |B|
};

OvpVerdict ovp_reduction(const PointSet& A, const PointSet& B);
bool ovp_brute_force(const PointSet& A, const PointSet& B);

}  // namespace dmx::cli
