#include "dmx/exact/matvec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dmx/error.hpp"
#include "dmx/exact/monomials.hpp"

namespace dmx {

namespace {

void check_query(std::size_t n, std::span<const double> z) {
  if (z.size() != n) throw DimensionError("query length " + std::to_string(z.size()) + " != n " + std::to_string(n));
}

std::vector<double> binomials(int p) {
  std::vector<double> c(p + 1, 1.0);
  for (int t = 1; t <= p; ++t) c[t] = c[t - 1] * (p - t + 1) / t;
  return c;
}

std::vector<double> midranges(const PointSet& X) {
  std::vector<double> lo(X.d(), std::numeric_limits<double>::infinity()), hi(X.d(), -lo[0]);
  for (std::size_t j = 0; j < X.n(); ++j) {
    auto x = X.row(j);
    for (std::size_t i = 0; i < X.d(); ++i) {
      lo[i] = std::min(lo[i], x[i]);
      hi[i] = std::max(hi[i], x[i]);
    }
  }
  for (std::size_t i = 0; i < X.d(); ++i) lo[i] = 0.5 * (lo[i] + hi[i]);
  return lo;
}

}  // namespace

void check_power_range(const PointSet& X, int p) {
  double m = 0.0;
  for (double v : X.data()) m = std::max(m, std::abs(v));
  if (m > 0.0 && p * std::log(m) + std::log(double(X.n())) >= std::log(std::numeric_limits<double>::max()))
    throw BudgetError("|x|^" + std::to_string(p) + " exceeds the double range");
}

std::vector<double> l1_matvec(const SortedIndex& idx, const PointSet& X, std::span<const double> z) {
  const std::size_t n = X.n();
  check_query(n, z);
  const double Z = std::accumulate(z.begin(), z.end(), 0.0);
  std::vector<double> out(n, 0.0);
  double tail = 0.0;  // sum over coordinates of sum_j z_j x_j(i)
  for (std::size_t i = 0; i < idx.d; ++i) {
    const std::uint32_t* ord = idx.order.data() + i * n;
    const double* sv = idx.sorted.data() + i * n;
    // exclusive prefix sums below rank r: B of z_j x_j(i), C of z_j
    double B = 0.0, C = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const std::uint32_t k = ord[r];
      const double a = sv[r];
      out[k] += a * (2.0 * C - Z) - 2.0 * B;
      C += z[k];
      B += z[k] * a;
    }
    tail += B;
  }
  for (double& v : out) v += tail;
  return out;
}

std::vector<double> tv_matvec(const SortedIndex& idx, const PointSet& X, std::span<const double> z) {
  auto out = l1_matvec(idx, X, z);
  for (double& v : out) v *= 0.5;
  return out;
}

std::vector<double> l2sq_matvec(const PointSet& X, std::span<const double> z) {
  const std::size_t n = X.n(), d = X.d();
  check_query(n, z);
  std::vector<double> v(d, 0.0), norms(n);
  double S1 = 0.0, S2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    auto x = X.row(j);
    double q = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      q += x[i] * x[i];
      v[i] += z[j] * x[i];
    }
    norms[j] = q;
    S1 += z[j];
    S2 += z[j] * q;
  }
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto x = X.row(k);
    double dot = 0.0;
    for (std::size_t i = 0; i < d; ++i) dot += x[i] * v[i];
    out[k] = S1 * norms[k] + S2 - 2.0 * dot;
  }
  return out;
}

std::vector<double> lpp_even_matvec(const PointSet& X, std::span<const double> z, int p) {
  if (p < 2 || p % 2) throw DomainError("lpp_even_matvec needs an even p >= 2");
  const std::size_t n = X.n(), d = X.d();
  check_query(n, z);
  check_power_range(X, p);
  const auto C = binomials(p);
  const auto mid = midranges(X);
  // S[i*(p+1) + t] = C(p,t) (-1)^(p-t) sum_j z_j x_j(i)^(p-t), coordinates shifted by mid
  std::vector<double> S(d * (p + 1), 0.0), pw(p + 1);
  for (std::size_t j = 0; j < n; ++j) {
    auto x = X.row(j);
    for (std::size_t i = 0; i < d; ++i) {
      pw[0] = 1.0;
      for (int e = 1; e <= p; ++e) pw[e] = pw[e - 1] * (x[i] - mid[i]);
      double* s = S.data() + i * (p + 1);
      for (int t = 0; t <= p; ++t) s[t] += z[j] * pw[p - t];
    }
  }
  for (std::size_t i = 0; i < d; ++i)
    for (int t = 0; t <= p; ++t) S[i * (p + 1) + t] *= C[t] * (((p - t) % 2) ? -1.0 : 1.0);
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    auto x = X.row(k);
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double* s = S.data() + i * (p + 1);
      // Horner in x_k(i)
      const double a = x[i] - mid[i];
      double h = s[p];
      for (int t = p - 1; t >= 0; --t) h = h * a + s[t];
      acc += h;
    }
    out[k] = acc;
  }
  return out;
}

std::vector<double> lpp_odd_matvec(const SortedIndex& idx, const PointSet& X, std::span<const double> z, int p) {
  if (p < 1 || p % 2 == 0) throw DomainError("lpp_odd_matvec needs an odd p >= 1");
  if (p == 1) return l1_matvec(idx, X, z);
  const std::size_t n = X.n();
  check_query(n, z);
  check_power_range(X, p);
  const auto C = binomials(p);
  std::vector<double> coef(p + 1);
  for (int t = 0; t <= p; ++t) coef[t] = C[t] * (((p - t) % 2) ? -1.0 : 1.0);
  std::vector<double> out(n, 0.0), total(p + 1), prefix(p + 1), pw(p + 1), g(p + 1);
  for (std::size_t i = 0; i < idx.d; ++i) {
    const std::uint32_t* ord = idx.order.data() + i * n;
    const double* sv = idx.sorted.data() + i * n;
    // small centered values keep the binomial terms from cancelling
    const double mid = 0.5 * (sv[0] + sv[n - 1]);
    // total[e] = sum_j z_j (x_j(i) - mid)^e
    std::fill(total.begin(), total.end(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      const double zj = z[ord[r]];
      double q = zj;
      for (int e = 0; e <= p; ++e) {
        total[e] += q;
        q *= sv[r] - mid;
      }
    }
    std::fill(prefix.begin(), prefix.end(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      const std::uint32_t k = ord[r];
      const double a = sv[r] - mid;
      // j below k contribute +(a - b)^p, j at or above contribute -(a - b)^p
      for (int t = 0; t <= p; ++t) g[t] = coef[t] * (2.0 * prefix[p - t] - total[p - t]);
      double h = g[p];
      for (int t = p - 1; t >= 0; --t) h = h * a + g[t];
      out[k] += h;
      double q = z[k];
      for (int e = 0; e <= p; ++e) {
        prefix[e] += q;
        q *= a;
      }
    }
  }
  return out;
}

std::vector<double> kl_family_matvec(const PointSet& X, std::span<const double> z, const Kernel& kernel) {
  if (!kernel.is_kl_family()) throw DomainError("kl_family_matvec needs kl, symkl or crossentropy");
  const std::size_t n = X.n(), d = X.d();
  check_query(n, z);
  const bool clamp = kernel.mode == ProbabilityMode::clamp;
  auto val = [&](double v) {
    if (v > 0.0) return v;
    if (clamp && v >= 0.0) return std::max(v, kernel.clamp_tau);
    throw DomainError(v < 0.0 ? "negative coordinate for " + kernel.name()
                              : "zero coordinate for " + kernel.name() + " in strict mode");
  };
  // per point: sum_i x log x (negative entropy); per coordinate: weighted sums
  std::vector<double> neg_h(n, 0.0), S(d, 0.0), V(d, 0.0), P(n * d);
  double Y = 0.0, W = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    auto x = X.row(j);
    double h = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double a = val(x[i]);
      const double la = std::log(a);
      P[j * d + i] = a;
      h += a * la;
      S[i] += z[j] * la;
      V[i] += z[j] * a;
    }
    neg_h[j] = h;
    Y += z[j];
    W += z[j] * h;
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double* a = P.data() + k * d;
    double cross = 0.0;
    for (std::size_t i = 0; i < d; ++i) cross += a[i] * S[i];
    if (kernel.tag == KernelTag::cross_entropy) {
      out[k] = -cross;
      continue;
    }
    double v = neg_h[k] * Y - cross;
    if (kernel.tag == KernelTag::sym_kl) {
      // sum_j z_j KL(x_j || x_k)
      double back = 0.0;
      for (std::size_t i = 0; i < d; ++i) back += std::log(a[i]) * V[i];
      v += W - back;
      if (kernel.half_sym_kl) v *= 0.5;
    }
    out[k] = v;
  }
  return out;
}

std::vector<double> bhattacharyya_matvec(const PointSet& X, std::span<const double> z) {
  const std::size_t n = X.n(), d = X.d();
  check_query(n, z);
  std::vector<double> v(d, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    auto x = X.row(j);
    for (std::size_t i = 0; i < d; ++i) {
      if (x[i] < 0.0) throw DomainError("row " + std::to_string(j) + ": negative coordinate for bhattacharyya");
      v[i] += z[j] * std::sqrt(x[i]);
    }
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    auto x = X.row(k);
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += std::sqrt(x[i]) * v[i];
    out[k] = s;
  }
  return out;
}

MinMaxIndex build_minmax_index(const PointSet& X) {
  MinMaxIndex m;
  m.lo.resize(X.n());
  m.hi.resize(X.n());
  for (std::size_t j = 0; j < X.n(); ++j) {
    auto [lo, hi] = std::minmax_element(X.row(j).begin(), X.row(j).end());
    m.lo[j] = *lo;
    m.hi[j] = *hi;
  }
  return m;
}

std::vector<double> mixed_linf_matvec(const MinMaxIndex& mmx, std::span<const double> z) {
  const std::size_t n = mmx.lo.size();
  check_query(n, z);
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double lk = mmx.lo[k], hk = mmx.hi[k];
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      // the extreme pair is (min of one, max of the other)
      const double v = std::max(hk - mmx.lo[j], mmx.hi[j] - lk);
      s += z[j] * v;
    }
    out[k] = s;
  }
  return out;
}

MahaIndex build_maha_index(const PointSet& X, const Eigen::MatrixXd& M) {
  if (static_cast<std::size_t>(M.rows()) != X.d() || static_cast<std::size_t>(M.cols()) != X.d())
    throw DimensionError("Mahalanobis matrix is not d x d");
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> Xm(X.data().data(), static_cast<Eigen::Index>(X.n()), static_cast<Eigen::Index>(X.d()));
  return {M * Xm.transpose()};
}

std::vector<double> mahalanobis_matvec(const MahaIndex& mi, const PointSet& X, std::span<const double> z) {
  const std::size_t n = X.n();
  check_query(n, z);
  if (static_cast<std::size_t>(mi.S.cols()) != n) throw DimensionError("index built for a different point set");
  Eigen::Map<const Eigen::VectorXd> zv(z.data(), static_cast<Eigen::Index>(n));
  Eigen::VectorXd v = mi.S * zv;
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> Xm(X.data().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(X.d()));
  Eigen::VectorXd r = Xm * v;
  return {r.data(), r.data() + n};
}

std::vector<double> poly_kernel_matvec(const PointSet& X, std::span<const double> z, int p, double monomial_budget) {
  if (p < 1) throw DomainError("polynomial kernel needs p >= 1");
  check_query(X.n(), z);
  MonomialExpansion mono(X.d(), p, monomial_budget);
  std::vector<double> out(X.n(), 0.0);
  mono.power_sum(X.data().data(), X.n(), X.data().data(), X.n(), z, 1.0, out);
  return out;
}

}  // namespace dmx
