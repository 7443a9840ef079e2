#include "dmx/exact/engines.hpp"

#include <algorithm>

#include "dmx/error.hpp"
#include "dmx/exact/monomials.hpp"
#include "dmx/naive.hpp"

namespace dmx {

ExactEngine::ExactEngine(Kernel kernel, std::shared_ptr<const PointSet> X, double monomial_budget)
    : MatVecEngine(X->n()), kernel_(std::move(kernel)), X_(std::move(X)), budget_(monomial_budget) {
  validate_domain(kernel_, *X_);
  switch (kernel_.tag) {
    case KernelTag::l1:
    case KernelTag::tv:
    case KernelTag::lpp_odd: sorted_ = build_sorted_index(*X_); break;
    case KernelTag::mixed_linf: minmax_ = build_minmax_index(*X_); break;
    case KernelTag::mahalanobis_sq: maha_ = build_maha_index(*X_, *kernel_.metric); break;
    case KernelTag::poly: MonomialExpansion(X_->d(), kernel_.p, budget_); break;  // budget check only
    case KernelTag::lpp_even: check_power_range(*X_, kernel_.p); break;
    case KernelTag::l2:
    case KernelTag::linf: throw DomainError(kernel_.name() + " has no exact fast engine");
    default: break;
  }
  if (kernel_.tag == KernelTag::lpp_odd) check_power_range(*X_, kernel_.p);
}

void ExactEngine::do_apply(std::span<const double> z, std::span<double> out) const {
  const PointSet& X = *X_;
  std::vector<double> r;
  switch (kernel_.tag) {
    case KernelTag::l1: r = l1_matvec(*sorted_, X, z); break;
    case KernelTag::tv: r = tv_matvec(*sorted_, X, z); break;
    case KernelTag::lpp_odd: r = lpp_odd_matvec(*sorted_, X, z, kernel_.p); break;
    case KernelTag::lpp_even: r = lpp_even_matvec(X, z, kernel_.p); break;
    case KernelTag::l2sq: r = l2sq_matvec(X, z); break;
    case KernelTag::kl:
    case KernelTag::sym_kl:
    case KernelTag::cross_entropy: r = kl_family_matvec(X, z, kernel_); break;
    case KernelTag::bhattacharyya: r = bhattacharyya_matvec(X, z); break;
    case KernelTag::mixed_linf: r = mixed_linf_matvec(*minmax_, z); break;
    case KernelTag::mahalanobis_sq: r = mahalanobis_matvec(*maha_, X, z); break;
    case KernelTag::poly: r = poly_kernel_matvec(X, z, kernel_.p, budget_); break;
    default: throw DomainError(kernel_.name() + " has no exact fast engine");
  }
  std::copy(r.begin(), r.end(), out.begin());
}

}  // namespace dmx
