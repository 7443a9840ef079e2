#include "dmx/linalg/matfree.hpp"

#include "dmx/error.hpp"

namespace dmx {

namespace {
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMat> as_matrix(const PointSet& X) {
  return {X.data().data(), static_cast<Eigen::Index>(X.n()), static_cast<Eigen::Index>(X.d())};
}
}  // namespace

Eigen::MatrixXd matmul_via_matvec(const MatVecEngine& engine, const Eigen::MatrixXd& B) {
  if (static_cast<std::size_t>(B.rows()) != engine.size())
    throw DimensionError("matmul_via_matvec: B has " + std::to_string(B.rows()) + " rows, engine has " +
                         std::to_string(engine.size()) + " points");
  Eigen::MatrixXd R(B.rows(), B.cols());
  for (Eigen::Index j = 0; j < B.cols(); ++j) {
    Eigen::VectorXd col = B.col(j);
    engine.apply(std::span<const double>(col.data(), col.size()), std::span<double>(R.col(j).data(), R.rows()));
  }
  return R;
}

Eigen::MatrixXd l2sq_pair_product(const PointSet& X, const PointSet& Y) {
  if (X.n() != Y.n()) throw DimensionError("l2sq_pair_product needs equal point counts");
  const auto n = static_cast<Eigen::Index>(X.n());
  auto Xm = as_matrix(X);
  auto Ym = as_matrix(Y);
  const Eigen::VectorXd a = Xm.rowwise().squaredNorm();
  const Eigen::VectorXd b = Ym.rowwise().squaredNorm();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd gy1 = Ym * (Ym.transpose() * ones);
  const Eigen::VectorXd gya = Ym * (Ym.transpose() * a);
  const Eigen::VectorXd gxb = Xm * (Xm.transpose() * b);
  const Eigen::VectorXd gx1 = Xm * (Xm.transpose() * ones);
  const double sa = a.sum(), sb = b.sum(), ab = a.dot(b), dn = double(n);

  // 4 X X^T Y Y^T evaluated as X ((X^T Y) Y^T)
  Eigen::MatrixXd R = 4.0 * ((Xm * (Xm.transpose() * Ym)) * Ym.transpose());
  // rank-one terms: columns depend on j, rows on i
  const Eigen::VectorXd col_term = sb * a - 2.0 * gxb + ab * ones;            // depends on i
  const Eigen::VectorXd row_term = sa * b - 2.0 * gya;                         // depends on j
  R.colwise() += col_term;
  R.rowwise() += row_term.transpose();
  R.noalias() += a * (dn * b - 2.0 * gy1).transpose();
  R.noalias() -= 2.0 * gx1 * b.transpose();
  return R;
}

}  // namespace dmx
