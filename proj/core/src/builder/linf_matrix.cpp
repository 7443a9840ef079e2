#include "dmx/builder/linf_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

#include "dmx/error.hpp"

namespace dmx {

namespace {

using boost::multiprecision::cpp_int;
using MatrixI = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

LinfLevel make_level(std::size_t d, std::int64_t M, std::int64_t j) {
  LinfLevel L;
  L.j = j;
  const cpp_int dd(d);
  int p = 2;
  while (!(dd * boost::multiprecision::pow(cpp_int(j), p) < boost::multiprecision::pow(cpp_int(j + 1), p))) p += 2;
  L.p = p;
  // every partial sum of the expansion is bounded by d (2M)^p
  const cpp_int bound = dd * boost::multiprecision::pow(cpp_int(2 * M), p);
  if (bound >= (cpp_int(1) << 63))
    throw BudgetError("int64 overflow guard fails at level j=" + std::to_string(j) + ", p=" + std::to_string(p));
  L.threshold = static_cast<std::int64_t>(dd * boost::multiprecision::pow(cpp_int(j), p));
  return L;
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

std::vector<LinfLevel> linf_level_plan(std::size_t d, std::int64_t M, LinfMode mode, double eps) {
  if (M < 0) throw DomainError("alphabet bound must be nonnegative");
  std::vector<LinfLevel> plan;
  if (mode == LinfMode::exact) {
    for (std::int64_t j = 0; j < M; ++j) plan.push_back(make_level(d, M, j));
  } else {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
    for (std::int64_t g = 1; g <= M;
         g = std::max(g + 1, static_cast<std::int64_t>(std::floor(double(g) * (1.0 + eps)))))
      plan.push_back(make_level(d, M, g - 1));
  }
  return plan;
}

DistanceMatrix linf_matrix_bounded(const PointSet& X, LinfMode mode, double eps) {
  const auto M = X.alphabet_bound();
  if (!M) throw DomainError("linf builder needs integer coordinates in [0, M]");
  const std::size_t n = X.n(), d = X.d();
  const auto plan = linf_level_plan(d, *M, mode, eps);
  DistanceMatrix B(n);
  MatrixI Xi(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c) Xi(i, c) = static_cast<std::int64_t>(X(i, c));

  constexpr std::size_t kBlock = 256;
  for (const auto& L : plan) {
    const int p = L.p;
    const auto feat = static_cast<Eigen::Index>((p + 1) * d);
    MatrixI phi(n, feat), psi(n, feat);
    std::vector<std::int64_t> binom(p + 1, 1);
    for (int t = 1; t <= p; ++t) binom[t] = binom[t - 1] * (p - t + 1) / t;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < d; ++c)
        for (int t = 0; t <= p; ++t) {
          const auto col = static_cast<Eigen::Index>(c * (p + 1) + t);
          const std::int64_t sign = (p - t) % 2 ? -1 : 1;
          phi(i, col) = sign * binom[t] * ipow(Xi(i, c), t);
          psi(i, col) = ipow(Xi(i, c), p - t);
        }
    const double step = mode == LinfMode::exact ? 1.0 : 0.0;
    for (std::size_t r0 = 0; r0 < n; r0 += kBlock) {
      const auto rows = static_cast<Eigen::Index>(std::min(kBlock, n - r0));
      const MatrixI G = phi.middleRows(static_cast<Eigen::Index>(r0), rows) * psi.transpose();
      for (Eigen::Index a = 0; a < rows; ++a)
        for (std::size_t j = 0; j < n; ++j)
          if (G(a, static_cast<Eigen::Index>(j)) > L.threshold) {
            double& e = B(r0 + static_cast<std::size_t>(a), j);
            e = mode == LinfMode::exact ? e + step : double(L.j + 1);
          }
    }
  }
  return B;
}

}  // namespace dmx
