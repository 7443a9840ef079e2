#include "dmx/linalg/matfree.hpp"

#include <algorithm>
#include <cmath>

#include "dmx/error.hpp"

namespace dmx {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// Residuals kept for reorthogonalization while they fit in this many doubles.
constexpr std::size_t kReorthDoubles = std::size_t(1) << 25;

}  // namespace

CgResult cg_solve(const MatVecEngine& engine, std::span<const double> b_in, double tol, std::size_t maxit,
                  CgMode mode) {
  const std::size_t n = engine.size();
  if (b_in.size() != n) throw DimensionError("cg_solve: right-hand side length does not match n");
  if (!engine.symmetric()) throw DomainError("cg_solve needs a symmetric engine");
  const std::vector<double> b(b_in.begin(), b_in.end());
  CgResult res;
  res.x.assign(n, 0.0);
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  std::vector<double> tmp(n);
  auto A = [&](const std::vector<double>& v, std::vector<double>& out) {
    engine.apply(v, out);
    ++res.queries;
  };

  // residual of the original system, s = b - A x
  std::vector<double> s = b;
  std::vector<double> r(n), p(n), Ap(n), AAp(n);
  // In floating point the residuals drift out of mutual orthogonality and CG
  // loses its n-step termination on wide spectra; keeping unit residuals and
  // projecting them out restores it.
  const bool reorth = n * std::min(maxit + 1, n) <= kReorthDoubles;
  std::vector<std::vector<double>> basis;
  auto remember = [&](double rr_now) {
    if (!reorth || !(rr_now > 0.0) || basis.size() >= n) return;
    const double inv = 1.0 / std::sqrt(rr_now);
    basis.emplace_back(r);
    for (double& v : basis.back()) v *= inv;
  };
  auto project = [&]() {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : basis) axpy(-dot(u, r), u, r);
  };
  // normal equations solve A^2 x = A b; r is then A s
  auto restart = [&]() {
    if (mode == CgMode::normal_equations) {
      A(s, r);
    } else {
      r = s;
    }
    p = r;
    basis.clear();
    remember(dot(r, r));
  };
  restart();
  double rr = dot(r, r);
  double energy = 0.0;
  while (res.iterations < maxit) {
    if (std::sqrt(dot(s, s)) <= tol * bnorm) {
      // confirm against an explicit residual before declaring success
      A(res.x, tmp);
      for (std::size_t i = 0; i < n; ++i) s[i] = b[i] - tmp[i];
      if (std::sqrt(dot(s, s)) <= tol * bnorm) {
        res.converged = true;
        break;
      }
      restart();
      rr = dot(r, r);
    }
    if (rr == 0.0) break;
    A(p, Ap);
    const double curvature = mode == CgMode::normal_equations ? dot(Ap, Ap) : dot(p, Ap);
    if (!(curvature > 0.0)) break;  // not positive definite along p
    const double alpha = rr / curvature;
    axpy(alpha, p, res.x);
    axpy(-alpha, Ap, s);
    if (mode == CgMode::normal_equations) {
      A(Ap, AAp);
      axpy(-alpha, AAp, r);
    } else {
      r = s;
    }
    ++res.iterations;
    // the squared error norm drops by alpha * rr per step
    energy += alpha * rr;
    res.energy.push_back(energy);
    project();
    if (mode == CgMode::direct) s = r;
    const double rr_new = dot(r, r);
    remember(rr_new);
    const double beta = rr_new / rr;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    rr = rr_new;
  }
  if (!res.converged && std::sqrt(dot(s, s)) <= tol * bnorm) {
    A(res.x, tmp);
    for (std::size_t i = 0; i < n; ++i) s[i] = b[i] - tmp[i];
    res.converged = std::sqrt(dot(s, s)) <= tol * bnorm;
  }
  res.relative_residual = std::sqrt(dot(s, s)) / bnorm;
  return res;
}

}  // namespace dmx
