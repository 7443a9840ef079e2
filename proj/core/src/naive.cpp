#include "dmx/naive.hpp"

#include <cmath>

#include "dmx/error.hpp"

namespace dmx {

void validate_domain(const Kernel& kernel, const PointSet& X) {
  if (kernel.tag == KernelTag::mahalanobis_sq) {
    if (!kernel.metric || static_cast<std::size_t>(kernel.metric->rows()) != X.d())
      throw DimensionError("Mahalanobis matrix is not d x d");
    return;
  }
  if (!kernel.is_distribution()) return;
  const bool strict_kl = kernel.is_kl_family() && kernel.mode == ProbabilityMode::strict;
  for (std::size_t i = 0; i < X.n(); ++i) {
    double sum = 0.0;
    for (double v : X.row(i)) {
      if (v < 0.0) throw DomainError("row " + std::to_string(i) + ": negative coordinate for " + kernel.name());
      if (strict_kl && v == 0.0)
        throw DomainError("row " + std::to_string(i) + ": zero coordinate for " + kernel.name() +
                          " in strict mode");
      sum += v;
    }
    if (kernel.tag == KernelTag::tv && kernel.mode == ProbabilityMode::strict && std::abs(sum - 1.0) > 1e-9)
      throw DomainError("row " + std::to_string(i) + ": not on the probability simplex");
  }
}

std::vector<double> naive_matvec(const Kernel& kernel, const PointSet& X, std::span<const double> z) {
  if (z.size() != X.n()) throw DimensionError("query length does not match n");
  validate_domain(kernel, X);
  std::vector<double> out(X.n(), 0.0);
  for (std::size_t k = 0; k < X.n(); ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < X.n(); ++j) s += z[j] * kernel(X.row(k), X.row(j));
    out[k] = s;
  }
  return out;
}

DistanceMatrix naive_matrix(const Kernel& kernel, const PointSet& X) {
  validate_domain(kernel, X);
  const std::size_t n = X.n();
  DistanceMatrix m(n);
  if (kernel.symmetric()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) m(i, j) = kernel(X.row(i), X.row(j));
    m.mirror_upper();
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = kernel(X.row(i), X.row(j));
  }
  return m;
}

}  // namespace dmx
