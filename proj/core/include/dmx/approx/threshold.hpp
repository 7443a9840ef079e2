#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dmx {

// Chebyshev polynomial C_q evaluated through cos/cosh, valid for any real u.
double chebyshev(int q, double u);

// T(x) = 1 - C_q(u(x)) / C_q(u(0)) with u mapping [1/d, 1] onto [-1, 1] and
// q the smallest even degree with C_q(|u(0)|) >= 1/eps. T(0) = 0 and
// |T - 1| <= 1/C_q(|u(0)|) <= eps on [1/d, 1].
struct ThresholdPolynomial {
  int degree = 0;
  int d = 0;
  double eps = 0.0;
  double bound = 0.0;                 // 1 / C_q(|u(0)|)
  std::vector<double> coefficients;   // ascending powers of x

  double operator()(double x) const;  // Horner on the expanded coefficients
  double direct(double x) const;      // un-expanded form
};

ThresholdPolynomial cheb_threshold_poly(int d, double eps);

// Polynomial g with g(0) = 0, |g| <= tol_low on [0, a] and |g - 1| <= tol_high
// on [b, hi]: a Chebyshev stage of even degree q followed by `rounds`
// applications of s -> 3s^2 - 2s^3. Evaluated directly, never expanded.
class GapIndicator {
 public:
  GapIndicator(double a, double b, double hi, double tol_low, double tol_high);

  double operator()(double x) const;
  double stage(double x) const;
  int chebyshev_degree() const noexcept { return q_; }
  int rounds() const noexcept { return rounds_; }
  double degree() const;  // q * 3^rounds

 private:
  double b_, hi_;
  int q_ = 0;
  int rounds_ = 0;
  double log_cq0_ = 0.0;  // log C_q(|u(0)|)
};

// Estimates ||x - y||_inf for points in {0..M}^d as
//   sum_{i=1..M} T2( (1/d) sum_j T1( ((x_j - y_j) / (i M))^k ) ).
class BoundedLinfEstimator {
 public:
  BoundedLinfEstimator(std::int64_t M, std::size_t d, double eps);

  double operator()(std::span<const double> x, std::span<const double> y) const;

  int power() const noexcept { return k_; }
  double log_t() const noexcept { return log_t_; }
  const GapIndicator& inner() const noexcept { return *t1_; }
  const GapIndicator& outer() const noexcept { return *t2_; }

 private:
  std::int64_t M_;
  std::size_t d_;
  double eps_;
  int k_ = 0;
  double log_t_ = 0.0;
  std::optional<GapIndicator> t1_;
  std::optional<GapIndicator> t2_;
};

double linf_bounded_estimator(std::span<const double> x, std::span<const double> y, std::int64_t M, double eps);

}  // namespace dmx
