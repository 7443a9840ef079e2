#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "dmx/exact/sorted_index.hpp"
#include "dmx/kernel.hpp"
#include "dmx/point_set.hpp"

namespace dmx {

std::vector<double> l1_matvec(const SortedIndex& idx, const PointSet& X, std::span<const double> z);
// Rows must lie on the simplex; checked by the engine, not here.
std::vector<double> tv_matvec(const SortedIndex& idx, const PointSet& X, std::span<const double> z);
std::vector<double> l2sq_matvec(const PointSet& X, std::span<const double> z);
std::vector<double> lpp_even_matvec(const PointSet& X, std::span<const double> z, int p);
std::vector<double> lpp_odd_matvec(const SortedIndex& idx, const PointSet& X, std::span<const double> z, int p);

// kernel selects KL, SymKL or CrossEntropy together with the zero handling.
std::vector<double> kl_family_matvec(const PointSet& X, std::span<const double> z, const Kernel& kernel);
std::vector<double> bhattacharyya_matvec(const PointSet& X, std::span<const double> z);

struct MinMaxIndex {
  std::vector<double> lo;
  std::vector<double> hi;
};
MinMaxIndex build_minmax_index(const PointSet& X);
std::vector<double> mixed_linf_matvec(const MinMaxIndex& mmx, std::span<const double> z);

struct MahaIndex {
  Eigen::MatrixXd S;  // d x n, column j = M x_j
};
MahaIndex build_maha_index(const PointSet& X, const Eigen::MatrixXd& M);
std::vector<double> mahalanobis_matvec(const MahaIndex& mi, const PointSet& X, std::span<const double> z);

std::vector<double> poly_kernel_matvec(const PointSet& X, std::span<const double> z, int p,
                                       double monomial_budget = 1e7);

// Throws BudgetError when max|x|^p overflows a double.
void check_power_range(const PointSet& X, int p);

}  // namespace dmx
