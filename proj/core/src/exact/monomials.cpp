#include "dmx/exact/monomials.hpp"

#include <cmath>
#include <string>

#include "dmx/error.hpp"

namespace dmx {

namespace {

// Walks every exponent vector of total degree rem over variables var..dim-1,
// handing the leaf value of `leaf(prod)` in enumeration order.
template <class Pow, class Emit>
void walk(std::size_t dim, std::size_t var, int rem, double prod, const Pow& pw, Emit& emit) {
  if (rem == 0) {
    emit(prod);
    return;
  }
  if (var + 1 == dim) {
    emit(prod * pw(var, rem));
    return;
  }
  for (int e = rem; e >= 0; --e) walk(dim, var + 1, rem - e, prod * pw(var, e), pw, emit);
}

}  // namespace

double monomial_count(std::size_t dim, int m) {
  double c = 1.0;
  for (int i = 1; i <= m; ++i) c = c * double(dim + static_cast<std::size_t>(i) - 1) / double(i);
  return std::round(c);
}

MonomialExpansion::MonomialExpansion(std::size_t dim, int degree, double budget)
    : dim_(dim), degree_(degree) {
  if (dim == 0 || degree < 0) throw DimensionError("monomial expansion needs dim >= 1, degree >= 0");
  double count = monomial_count(dim, degree);
  if (count > budget)
    throw BudgetError("monomial budget exceeded: " + std::to_string(static_cast<long long>(count)) +
                      " monomials of degree " + std::to_string(degree) + " in " + std::to_string(dim) +
                      " variables");
  size_ = static_cast<std::size_t>(count);
  multinomial_.reserve(size_);
  std::vector<double> inv_fact(degree + 1, 1.0);
  double fact = 1.0;
  for (int e = 1; e <= degree; ++e) {
    fact *= e;
    inv_fact[e] = 1.0 / fact;
  }
  // prod carries prod_i 1/alpha_i!; zero exponents contribute 1
  auto pw = [&](std::size_t, int e) { return inv_fact[e]; };
  auto emit = [&](double prod) { multinomial_.push_back(std::round(fact * prod)); };
  walk(dim_, 0, degree_, 1.0, pw, emit);
}

void MonomialExpansion::evaluate(const double* x, double* out) const {
  std::vector<double> table;
  evaluate(x, out, table);
}

void MonomialExpansion::evaluate(const double* x, double* out, std::vector<double>& table) const {
  const int stride = degree_ + 1;
  table.resize(dim_ * stride);
  for (std::size_t v = 0; v < dim_; ++v) {
    double* t = table.data() + v * stride;
    t[0] = 1.0;
    for (int e = 1; e <= degree_; ++e) t[e] = t[e - 1] * x[v];
  }
  auto pw = [&](std::size_t v, int e) { return table[v * stride + e]; };
  auto emit = [&](double prod) { *out++ = prod; };
  walk(dim_, 0, degree_, 1.0, pw, emit);
}

void MonomialExpansion::power_sum(const double* U, std::size_t n_u, const double* V, std::size_t n_v,
                                  std::span<const double> z, double scale, std::span<double> out) const {
  std::vector<double> coef(size_, 0.0), mono(size_), table;
  for (std::size_t j = 0; j < n_v; ++j) {
    if (z[j] == 0.0) continue;
    evaluate(V + j * dim_, mono.data(), table);
    for (std::size_t m = 0; m < size_; ++m) coef[m] += z[j] * mono[m];
  }
  for (std::size_t m = 0; m < size_; ++m) coef[m] *= multinomial_[m] * scale;
  for (std::size_t k = 0; k < n_u; ++k) {
    evaluate(U + k * dim_, mono.data(), table);
    double s = 0.0;
    for (std::size_t m = 0; m < size_; ++m) s += coef[m] * mono[m];
    out[k] += s;
  }
}

}  // namespace dmx
