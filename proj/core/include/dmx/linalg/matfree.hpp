#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "dmx/engine.hpp"
#include "dmx/point_set.hpp"

namespace dmx {

// Column j of the result is engine.query(B.col(j)).
Eigen::MatrixXd matmul_via_matvec(const MatVecEngine& engine, const Eigen::MatrixXd& B);

// A B for the squared-Euclidean distance matrices A of X and B of Y, using
// A = a 1^T + 1 a^T - 2 X X^T (a = squared norms), likewise B.
Eigen::MatrixXd l2sq_pair_product(const PointSet& X, const PointSet& Y);

struct KrylovOptions {
  std::size_t oversample = 8;      // b = k + oversample
  double depth_constant = 1.0;     // q = ceil(c ln n / sqrt(eps)), at least min_depth
  std::size_t min_depth = 4;
  std::optional<std::size_t> depth;  // overrides the formula
};

// Orthonormal basis of [A Omega, A^2 Omega, ..., A^q Omega] together with A Q.
struct KrylovState {
  std::size_t block = 0;
  std::size_t depth = 0;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd AQ;
  std::size_t queries = 0;
  std::size_t redrawn = 0;  // columns replaced after rank loss
};

struct LowRankFactors {
  Eigen::MatrixXd Z;             // n x k, orthonormal columns
  Eigen::MatrixXd coefficients;  // k x n, Z^T A
  Eigen::VectorXd ritz;          // k Ritz values, |.| nonincreasing
  std::size_t block = 0;
  std::size_t depth = 0;
  std::size_t queries = 0;
};

std::size_t krylov_depth(std::size_t n, double eps, const KrylovOptions& opts);
KrylovState build_block_krylov(const MatVecEngine& engine, std::size_t block, std::size_t depth, std::uint64_t seed);

// Needs a symmetric engine and 1 <= k < n. Issues exactly b (q + 1) + k queries.
LowRankFactors block_krylov_lowrank(const MatVecEngine& engine, std::size_t k, double eps, std::uint64_t seed,
                                    const KrylovOptions& opts = {});
std::vector<double> topk_singular_values(const MatVecEngine& engine, std::size_t k, double eps,
                                         std::uint64_t seed, const KrylovOptions& opts = {});

// Ritz estimate of the Schatten-p norm of A (p = 1, 2, or infinity as 0).
double ritz_schatten_norm(std::span<const double> singular_values, int p);

enum class CgMode { direct, normal_equations };

struct CgResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  std::size_t queries = 0;
  double relative_residual = 0.0;  // ||A x - b|| / ||b||
  bool converged = false;
  std::vector<double> energy;      // cumulative drop of the error energy, one entry per iteration
};

CgResult cg_solve(const MatVecEngine& engine, std::span<const double> b, double tol, std::size_t maxit,
                  CgMode mode = CgMode::direct);

}  // namespace dmx
