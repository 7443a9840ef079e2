#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "dmx/engine.hpp"
#include "dmx/exact/sorted_index.hpp"
#include "dmx/point_set.hpp"

namespace dmx {

// Random linear map T(x) = Z x / (beta k) with k x d standard Gaussian Z.
// ||T(x)||_1 concentrates around ||x||_2 since E|<g, x>| = beta ||x||_2.
struct L1Embedding {
  static constexpr double beta = 0.79788456080286535588;  // sqrt(2 / pi)

  std::size_t k = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd Z;  // k x d
  std::shared_ptr<const PointSet> embedded;

  std::vector<double> apply(std::span<const double> x) const;
};

std::size_t embedding_dimension(std::size_t n, double eps, double alpha = 12.0);
L1Embedding l1_embed(const PointSet& X, double eps, std::uint64_t seed, double alpha = 12.0);

// l1 engine over the embedded points.
class L2ApproxEngine final : public MatVecEngine {
 public:
  L2ApproxEngine(const PointSet& X, double eps, std::uint64_t seed, double alpha = 12.0);
  bool symmetric() const override { return true; }
  std::string name() const override { return "l2~"; }
  const L1Embedding& embedding() const noexcept { return emb_; }

 private:
  void do_apply(std::span<const double> z, std::span<double> out) const override;
  L1Embedding emb_;
  SortedIndex idx_;
};

}  // namespace dmx
