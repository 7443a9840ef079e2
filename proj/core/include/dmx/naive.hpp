#pragma once

#include <span>
#include <vector>

#include "dmx/distance_matrix.hpp"
#include "dmx/kernel.hpp"
#include "dmx/point_set.hpp"

namespace dmx {

// Throws DomainError when X is outside the kernel's domain.
void validate_domain(const Kernel& kernel, const PointSet& X);

// result(k) = sum_j z_j f(x_k, x_j), direct double loop.
std::vector<double> naive_matvec(const Kernel& kernel, const PointSet& X, std::span<const double> z);

// Entry (i, j) = f(x_i, x_j). Symmetric kernels evaluate the upper triangle
// and mirror it.
DistanceMatrix naive_matrix(const Kernel& kernel, const PointSet& X);

}  // namespace dmx
