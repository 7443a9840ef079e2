#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dmx {

// Number of multi-indices of total degree m over dim variables,
// C(dim + m - 1, m), as a double so budgets can be checked without overflow.
double monomial_count(std::size_t dim, int m);

// Fixed enumeration of the monomials x^alpha with |alpha| = degree.
class MonomialExpansion {
 public:
  MonomialExpansion(std::size_t dim, int degree, double budget = 1e7);

  std::size_t dim() const noexcept { return dim_; }
  int degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return size_; }
  // degree! / alpha!, in enumeration order
  std::span<const double> multinomials() const noexcept { return multinomial_; }

  // out[m] = x^alpha_m; out has size() entries, x has dim() entries.
  void evaluate(const double* x, double* out) const;
  void evaluate(const double* x, double* out, std::vector<double>& scratch) const;

  // out[k] += scale * sum_j z_j <u_k, v_j>^degree, where U and V are row-major
  // n_u x dim and n_v x dim.
  void power_sum(const double* U, std::size_t n_u, const double* V, std::size_t n_v,
                 std::span<const double> z, double scale, std::span<double> out) const;

 private:
  std::size_t dim_;
  int degree_;
  std::size_t size_;
  std::vector<double> multinomial_;
};

}  // namespace dmx
