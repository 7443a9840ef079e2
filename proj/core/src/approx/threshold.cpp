#include "dmx/approx/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "dmx/error.hpp"

namespace dmx {

namespace mp = boost::multiprecision;
using Rational = mp::cpp_rational;

double chebyshev(int q, double u) {
  if (std::abs(u) <= 1.0) return std::cos(q * std::acos(u));
  double c = std::cosh(q * std::acosh(std::abs(u)));
  return (u < 0.0 && q % 2) ? -c : c;
}

namespace {

// Rational polynomial helpers, ascending coefficients.
using Poly = std::vector<Rational>;

Rational eval(const Poly& p, const Rational& x) {
  Rational r = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
  return r;
}

std::vector<mp::cpp_int> chebyshev_coefficients(int q) {
  std::vector<mp::cpp_int> prev{1}, cur{0, 1};
  if (q == 0) return prev;
  for (int k = 1; k < q; ++k) {
    std::vector<mp::cpp_int> next(cur.size() + 1, 0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

Poly to_poly(const std::vector<mp::cpp_int>& c) { return Poly(c.begin(), c.end()); }

}  // namespace

ThresholdPolynomial cheb_threshold_poly(int d, double eps) {
  if (d < 2) throw DomainError("threshold polynomial needs d >= 2");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("threshold polynomial needs 0 < eps < 1");
  const Rational alpha(2 * d, d - 1);
  const Rational beta(-(d + 1), d - 1);
  const Rational inv_eps = 1 / Rational(eps);
  const Rational u0 = -beta;  // |u(0)|

  int q = 2;
  Poly cq = to_poly(chebyshev_coefficients(q));
  while (eval(cq, u0) < inv_eps) {
    q += 2;
    cq = to_poly(chebyshev_coefficients(q));
  }

  // P(x) = C_q(alpha x + beta) by Horner over linear factors
  Poly P{cq.back()};
  for (int k = q - 1; k >= 0; --k) {
    Poly next(P.size() + 1, Rational(0));
    for (std::size_t i = 0; i < P.size(); ++i) {
      next[i] += P[i] * beta;
      next[i + 1] += P[i] * alpha;
    }
    next[0] += cq[k];
    P = std::move(next);
  }
  const Rational p0 = P[0];

  ThresholdPolynomial t;
  t.degree = q;
  t.d = d;
  t.eps = eps;
  t.bound = static_cast<double>(Rational(1) / p0);
  t.coefficients.assign(P.size(), 0.0);
  for (std::size_t m = 1; m < P.size(); ++m) t.coefficients[m] = static_cast<double>(-P[m] / p0);
  return t;
}

double ThresholdPolynomial::operator()(double x) const {
  double r = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) r = r * x + *it;
  return r;
}

double ThresholdPolynomial::direct(double x) const {
  const double u = (2.0 * d * x - (d + 1.0)) / (d - 1.0);
  const double u0 = -(d + 1.0) / (d - 1.0);
  return 1.0 - chebyshev(degree, u) / chebyshev(degree, u0);
}

GapIndicator::GapIndicator(double a, double b, double hi, double tol_low, double tol_high) : b_(b), hi_(hi) {
  if (!(a > 0.0 && a < b)) throw DomainError("gap indicator needs 0 < a < b");
  if (!(tol_low > 0.0 && tol_high > 0.0)) throw DomainError("gap indicator needs positive tolerances");
  // a single-point high side still needs a nondegenerate interval to map
  hi_ = std::max(hi, 2.0 * b - a);
  const double w = hi_ - b_;
  const double B = std::acosh((b_ + hi_) / w);
  const double A = std::acosh((b_ + hi_ - 2.0 * a) / w);
  // 1 - C_q(|u(a)|)/C_q(|u(0)|) as a function of q, increasing
  auto low_dev = [&](double q) {
    return 1.0 - std::exp(q * (A - B)) * (1.0 + std::exp(-2.0 * q * A)) / (1.0 + std::exp(-2.0 * q * B));
  };
  constexpr double kLowStart = 0.3;
  if (low_dev(2.0) > kLowStart) throw DomainError("gap too narrow for the indicator construction");
  double q_est = std::log(1.0 / (1.0 - kLowStart)) / (B - A);
  if (q_est > 1e9) throw BudgetError("gap indicator degree exceeds 1e9");
  int q = std::max(2, 2 * static_cast<int>(q_est / 2.0));
  while (q > 2 && low_dev(q) > kLowStart) q -= 2;
  while (low_dev(q + 2) <= kLowStart) q += 2;
  q_ = q;
  log_cq0_ = q * B + std::log1p(std::exp(-2.0 * q * B)) - std::log(2.0);

  // low side sits in [0, dl]; high side in [1 - dh, 1 + dh], and an
  // overshoot e lands at 1 - 3e^2 - 2e^3, inside [0, 1] from then on
  double dl = low_dev(q);
  double dh = std::exp(-log_cq0_);
  if (3.0 * dh * dh + 2.0 * dh * dh * dh >= 0.5) throw DomainError("gap indicator high side does not converge");
  bool first = true;
  while (dl > tol_low || dh > tol_high) {
    dl = dl * dl * (3.0 - 2.0 * dl);
    dh = first ? dh * dh * (3.0 + 2.0 * dh) : dh * dh * (3.0 - 2.0 * dh);
    first = false;
    if (++rounds_ > 64) throw BudgetError("gap indicator amplification did not converge");
  }
}

double GapIndicator::stage(double x) const {
  const double w = hi_ - b_;
  const double u = (2.0 * x - b_ - hi_) / w;
  const double u0 = (-b_ - hi_) / w;
  const double c0 = std::cosh(q_ * std::acosh(-u0));
  return 1.0 - chebyshev(q_, u) / c0;
}

double GapIndicator::operator()(double x) const {
  double y = stage(x);
  for (int r = 0; r < rounds_; ++r) y = y * y * (3.0 - 2.0 * y);
  return y;
}

double GapIndicator::degree() const { return q_ * std::pow(3.0, rounds_); }

namespace {

int smallest_even_at_least(double v) {
  int k = std::max(2, static_cast<int>(std::ceil(v)));
  return k % 2 ? k + 1 : k;
}

// T1 must hit 1 within eps'/t^2 on its high side; floored so the
// amplification loop terminates.
double inner_high_tol(double e, double log_t) { return std::max(std::min(e * std::exp(-2.0 * log_t), 0.05), 1e-300); }

}  // namespace

BoundedLinfEstimator::BoundedLinfEstimator(std::int64_t M, std::size_t d, double eps) : M_(M), d_(d), eps_(eps) {
  if (M < 1 || d < 1) throw DomainError("estimator needs M >= 1 and d >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("estimator needs 0 < eps < 1");
  k_ = smallest_even_at_least(2.0 * double(M) * std::log(double(M) * double(d)));
  log_t_ = k_ * std::log(double(M));
  if (log_t_ > 600.0)
    throw BudgetError("estimator parameter overflow: M^k = exp(" + std::to_string(log_t_) + ")");
  const double inv_t = std::exp(-log_t_);
  const double e = eps / double(M);
  const double dd = double(d);
  const double high1 = inner_high_tol(e, log_t_);
  t1_.emplace(0.1 * inv_t, inv_t, 1.0, std::min(e * inv_t, 1.0 / (20.0 * dd)), high1);
  t2_.emplace(1.0 / (10.0 * dd), (1.0 - high1) / dd, 1.0 + high1, e, e);
}

double BoundedLinfEstimator::operator()(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != d_ || y.size() != d_) throw DimensionError("estimator input has wrong dimension");
  double total = 0.0;
  for (std::int64_t i = 1; i <= M_; ++i) {
    const double scale = double(i) * double(M_);
    double avg = 0.0;
    for (std::size_t j = 0; j < d_; ++j) {
      const double diff = std::abs(x[j] - y[j]);
      if (diff > double(M_)) throw DomainError("estimator input outside {0..M}");
      const double r = diff == 0.0 ? 0.0 : std::pow(diff / scale, k_);
      avg += (*t1_)(r);
    }
    total += (*t2_)(avg / double(d_));
  }
  return total;
}

double linf_bounded_estimator(std::span<const double> x, std::span<const double> y, std::int64_t M, double eps) {
  return BoundedLinfEstimator(M, x.size(), eps)(x, y);
}

}  // namespace dmx
