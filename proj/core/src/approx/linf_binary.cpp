#include "dmx/approx/linf_binary.hpp"

#include <algorithm>
#include <cmath>

#include "dmx/error.hpp"

namespace dmx {

LinfBinaryEngine::LinfBinaryEngine(std::shared_ptr<const PointSet> X, double eps, double monomial_budget)
    : MatVecEngine(X->n()), X_(std::move(X)) {
  if (!X_->is_binary()) throw DomainError("binary l-inf engine needs coordinates in {0, 1}");
  const std::size_t n = X_->n(), d = X_->d();
  if (d < 2) throw DomainError("binary l-inf engine needs d >= 2");
  poly_ = cheb_threshold_poly(static_cast<int>(d), eps);
  const std::size_t D = d + 2;
  for (int m = 0; m <= poly_.degree; ++m) monomials_ += monomial_count(D, m);
  if (monomials_ > monomial_budget)
    throw BudgetError("monomial budget exceeded: " + std::to_string(static_cast<long long>(monomials_)) +
                      " monomials for d = " + std::to_string(d) + ", degree " + std::to_string(poly_.degree));
  lifted_left_.resize(n * D);
  lifted_right_.resize(n * D);
  for (std::size_t j = 0; j < n; ++j) {
    auto x = X_->row(j);
    double sq = 0.0;
    for (std::size_t i = 0; i < d; ++i) sq += x[i] * x[i];
    double* l = lifted_left_.data() + j * D;
    double* r = lifted_right_.data() + j * D;
    for (std::size_t i = 0; i < d; ++i) {
      l[i] = x[i];
      r[i] = -2.0 * x[i];
    }
    l[d] = sq;
    l[d + 1] = 1.0;
    r[d] = 1.0;
    r[d + 1] = sq;
  }
  powers_.reserve(poly_.degree + 1);
  for (int m = 0; m <= poly_.degree; ++m) powers_.emplace_back(D, m, monomial_budget);
}

void LinfBinaryEngine::do_apply(std::span<const double> z, std::span<double> out) const {
  const std::size_t n = size();
  const double inv_d = 1.0 / double(X_->d());
  double scale = 1.0;
  for (int m = 0; m <= poly_.degree; ++m, scale *= inv_d) {
    const double c = poly_.coefficients[m];
    if (c == 0.0) continue;
    powers_[m].power_sum(lifted_left_.data(), n, lifted_right_.data(), n, z, c * scale, out);
  }
}

std::vector<double> linf_binary_approx_matvec(const PointSet& X, std::span<const double> z, double eps,
                                              double monomial_budget) {
  LinfBinaryEngine e(std::make_shared<const PointSet>(X), eps, monomial_budget);
  return e.query(z);
}

}  // namespace dmx
