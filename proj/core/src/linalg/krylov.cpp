#include "dmx/linalg/matfree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "dmx/error.hpp"

namespace dmx {

namespace {

// Orthonormalizes the columns of W against Q(:, 0..filled) and among
// themselves (two Gram-Schmidt passes). A column that collapses is replaced
// by a fresh Gaussian direction. Returns the number of replacements.
std::size_t orthonormalize_block(const Eigen::MatrixXd& Q, Eigen::Index filled, Eigen::MatrixXd& W,
                                 std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  std::size_t redrawn = 0;
  for (Eigen::Index c = 0; c < W.cols(); ++c) {
    double start = W.col(c).norm();
    for (int attempt = 0;; ++attempt) {
      for (int pass = 0; pass < 2; ++pass) {
        if (filled > 0) W.col(c) -= Q.leftCols(filled) * (Q.leftCols(filled).transpose() * W.col(c));
        for (Eigen::Index p = 0; p < c; ++p) W.col(c) -= W.col(p) * W.col(p).dot(W.col(c));
      }
      const double norm = W.col(c).norm();
      if (norm > 1e-10 * std::max(start, 1e-300) && norm > 1e-300) {
        W.col(c) /= norm;
        break;
      }
      if (attempt > 8) throw Error("block Krylov: cannot extend the basis");
      for (Eigen::Index r = 0; r < W.rows(); ++r) W(r, c) = normal(gen);
      start = W.col(c).norm();
      ++redrawn;
    }
  }
  return redrawn;
}

void apply_block(const MatVecEngine& engine, const Eigen::MatrixXd& V, Eigen::MatrixXd& out, std::size_t& queries) {
  out.resize(V.rows(), V.cols());
  for (Eigen::Index c = 0; c < V.cols(); ++c) {
    engine.apply(std::span<const double>(V.col(c).data(), V.rows()), std::span<double>(out.col(c).data(), V.rows()));
    ++queries;
  }
}

struct Ritz {
  Eigen::MatrixXd vectors;  // in the basis coordinates
  Eigen::VectorXd values;
};

Ritz rayleigh_ritz(const KrylovState& s, std::size_t k) {
  Eigen::MatrixXd H = s.Q.transpose() * s.AQ;
  H = 0.5 * (H + H.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(lam.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return std::abs(lam(a)) > std::abs(lam(b)); });
  Ritz r;
  r.vectors.resize(H.rows(), static_cast<Eigen::Index>(k));
  r.values.resize(static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    r.vectors.col(static_cast<Eigen::Index>(i)) = eig.eigenvectors().col(order[i]);
    r.values(static_cast<Eigen::Index>(i)) = lam(order[i]);
  }
  return r;
}

void check_args(const MatVecEngine& engine, std::size_t k) {
  if (!engine.symmetric()) throw DomainError("block Krylov needs a symmetric engine");
  if (k < 1 || k >= engine.size()) throw DimensionError("block Krylov needs 1 <= k < n");
}

}  // namespace

std::size_t krylov_depth(std::size_t n, double eps, const KrylovOptions& opts) {
  if (opts.depth) return std::max<std::size_t>(1, *opts.depth);
  if (!(eps > 0.0)) throw DomainError("block Krylov needs eps > 0");
  double q = std::ceil(opts.depth_constant * std::log(double(n)) / std::sqrt(eps));
  return std::max<std::size_t>(opts.min_depth, static_cast<std::size_t>(q));
}

KrylovState build_block_krylov(const MatVecEngine& engine, std::size_t block, std::size_t depth, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(engine.size());
  const auto b = static_cast<Eigen::Index>(block);
  if (block < 1 || depth < 1) throw DimensionError("block Krylov needs block, depth >= 1");
  if (block * depth > engine.size())
    throw DimensionError("block Krylov basis of " + std::to_string(block * depth) + " columns exceeds n = " +
                         std::to_string(engine.size()));
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd omega(n, b);
  for (Eigen::Index c = 0; c < b; ++c)
    for (Eigen::Index r = 0; r < n; ++r) omega(r, c) = normal(gen);

  KrylovState s;
  s.block = block;
  s.depth = depth;
  s.Q.resize(n, b * static_cast<Eigen::Index>(depth));
  s.AQ.resize(n, b * static_cast<Eigen::Index>(depth));
  Eigen::MatrixXd W;
  apply_block(engine, omega, W, s.queries);
  for (std::size_t level = 0; level < depth; ++level) {
    const Eigen::Index off = b * static_cast<Eigen::Index>(level);
    s.redrawn += orthonormalize_block(s.Q, off, W, gen);
    s.Q.middleCols(off, b) = W;
    Eigen::MatrixXd AW;
    apply_block(engine, s.Q.middleCols(off, b), AW, s.queries);
    s.AQ.middleCols(off, b) = AW;
    W = std::move(AW);
  }
  return s;
}

LowRankFactors block_krylov_lowrank(const MatVecEngine& engine, std::size_t k, double eps, std::uint64_t seed,
                                    const KrylovOptions& opts) {
  check_args(engine, k);
  const std::size_t n = engine.size();
  const std::size_t b = std::min(k + opts.oversample, n);
  std::size_t q = krylov_depth(n, eps, opts);
  q = std::max<std::size_t>(1, std::min(q, n / b));
  KrylovState s = build_block_krylov(engine, b, q, seed);
  Ritz r = rayleigh_ritz(s, k);

  LowRankFactors f;
  f.Z = s.Q * r.vectors;
  // one more Gram-Schmidt sweep keeps Z^T Z = I tight
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(f.Z);
  Eigen::MatrixXd Zq = qr.householderQ() * Eigen::MatrixXd::Identity(f.Z.rows(), f.Z.cols());
  for (Eigen::Index c = 0; c < Zq.cols(); ++c)
    if (Zq.col(c).dot(f.Z.col(c)) < 0.0) Zq.col(c) = -Zq.col(c);
  f.Z = std::move(Zq);
  f.ritz = r.values;
  f.block = b;
  f.depth = q;
  Eigen::MatrixXd AZ;
  std::size_t extra = 0;
  apply_block(engine, f.Z, AZ, extra);
  f.coefficients = AZ.transpose();
  f.queries = s.queries + extra;
  return f;
}

std::vector<double> topk_singular_values(const MatVecEngine& engine, std::size_t k, double eps, std::uint64_t seed,
                                         const KrylovOptions& opts) {
  check_args(engine, k);
  const std::size_t n = engine.size();
  const std::size_t b = std::min(k + opts.oversample, n);
  std::size_t q = krylov_depth(n, eps, opts);
  q = std::max<std::size_t>(1, std::min(q, n / b));
  KrylovState s = build_block_krylov(engine, b, q, seed);
  Ritz r = rayleigh_ritz(s, k);
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = std::abs(r.values(static_cast<Eigen::Index>(i)));
  return out;
}

double ritz_schatten_norm(std::span<const double> s, int p) {
  if (p == 0) return s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
  if (p < 1) throw DomainError("Schatten norm needs p >= 1 or p = 0 for the spectral norm");
  double acc = 0.0;
  for (double v : s) acc += std::pow(std::abs(v), p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace dmx
