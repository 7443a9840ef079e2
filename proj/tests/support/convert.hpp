#pragma once

#include <vector>

#include "dmx/distance_matrix.hpp"
#include "dmx/point_set.hpp"
#include "oracles.hpp"

namespace testing_support {

inline dmx::PointSet to_points(const oracle::Rows& rows) {
  const std::size_t n = rows.size(), d = rows.empty() ? 0 : rows[0].size();
  std::vector<double> data;
  data.reserve(n * d);
  for (const auto& r : rows) data.insert(data.end(), r.begin(), r.end());
  return dmx::PointSet(n, d, std::move(data));
}

inline oracle::Rows to_rows(const dmx::PointSet& X) {
  oracle::Rows rows(X.n());
  for (std::size_t i = 0; i < X.n(); ++i) rows[i].assign(X.row(i).begin(), X.row(i).end());
  return rows;
}

inline Eigen::MatrixXd to_eigen(const dmx::DistanceMatrix& A) {
  Eigen::MatrixXd M(A.n(), A.n());
  for (std::size_t i = 0; i < A.n(); ++i)
    for (std::size_t j = 0; j < A.n(); ++j) M(Eigen::Index(i), Eigen::Index(j)) = A(i, j);
  return M;
}

}  // namespace testing_support
