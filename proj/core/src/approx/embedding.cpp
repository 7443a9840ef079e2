#include "dmx/approx/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dmx/error.hpp"
#include "dmx/exact/matvec.hpp"

namespace dmx {

std::size_t embedding_dimension(std::size_t n, double eps, double alpha) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("embedding needs 0 < eps < 1");
  double k = std::ceil(alpha * std::log(double(n)) / (eps * eps));
  return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

L1Embedding l1_embed(const PointSet& X, double eps, std::uint64_t seed, double alpha) {
  L1Embedding e;
  e.k = embedding_dimension(X.n(), eps, alpha);
  e.seed = seed;
  const auto k = static_cast<Eigen::Index>(e.k);
  const auto d = static_cast<Eigen::Index>(X.d());
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  e.Z.resize(k, d);
  for (Eigen::Index r = 0; r < k; ++r)
    for (Eigen::Index c = 0; c < d; ++c) e.Z(r, c) = normal(gen);

  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> Xm(X.data().data(), static_cast<Eigen::Index>(X.n()), d);
  RowMat Y = (Xm * e.Z.transpose()) * (1.0 / (L1Embedding::beta * double(e.k)));
  e.embedded = std::make_shared<const PointSet>(X.n(), e.k, std::vector<double>(Y.data(), Y.data() + Y.size()));
  return e;
}

std::vector<double> L1Embedding::apply(std::span<const double> x) const {
  if (static_cast<Eigen::Index>(x.size()) != Z.cols()) throw DimensionError("embedding input has wrong dimension");
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), Z.cols());
  Eigen::VectorXd y = (Z * xv) * (1.0 / (beta * double(k)));
  return {y.data(), y.data() + y.size()};
}

L2ApproxEngine::L2ApproxEngine(const PointSet& X, double eps, std::uint64_t seed, double alpha)
    : MatVecEngine(X.n()), emb_(l1_embed(X, eps, seed, alpha)), idx_(build_sorted_index(*emb_.embedded)) {}

void L2ApproxEngine::do_apply(std::span<const double> z, std::span<double> out) const {
  auto r = l1_matvec(idx_, *emb_.embedded, z);
  std::copy(r.begin(), r.end(), out.begin());
}

}  // namespace dmx
