#pragma once

#include <memory>
#include <vector>

#include "dmx/approx/threshold.hpp"
#include "dmx/engine.hpp"
#include "dmx/exact/monomials.hpp"

namespace dmx {

// Multiplies by B with B_ij = T(||x_i - x_j||^2 / d) for binary points, T from
// cheb_threshold_poly(d, eps), so |B_ij - ||x_i - x_j||_inf| <= eps.
// ||w - x||^2 = <(w, |w|^2, 1), (-2x, 1, |x|^2)>, so each power of the
// squared distance is a polynomial kernel in d + 2 lifted coordinates.
class LinfBinaryEngine final : public MatVecEngine {
 public:
  LinfBinaryEngine(std::shared_ptr<const PointSet> X, double eps, double monomial_budget = 1e7);

  bool symmetric() const override { return true; }
  std::string name() const override { return "linf~binary"; }
  const ThresholdPolynomial& polynomial() const noexcept { return poly_; }
  double monomials() const noexcept { return monomials_; }

 private:
  void do_apply(std::span<const double> z, std::span<double> out) const override;

  std::shared_ptr<const PointSet> X_;
  ThresholdPolynomial poly_;
  std::vector<double> lifted_left_;   // n x (d + 2)
  std::vector<double> lifted_right_;  // n x (d + 2)
  std::vector<MonomialExpansion> powers_;  // degree m = index
  double monomials_ = 0.0;
};

std::vector<double> linf_binary_approx_matvec(const PointSet& X, std::span<const double> z, double eps,
                                              double monomial_budget = 1e7);

}  // namespace dmx
