#include <gtest/gtest.h>

#include <cmath>

#include "dmx/engine.hpp"
#include "dmx/error.hpp"
#include "dmx/exact/engines.hpp"
#include "dmx/exact/matvec.hpp"
#include "dmx/exact/monomials.hpp"
#include "dmx/exact/sorted_index.hpp"
#include "support/convert.hpp"

using namespace dmx;
using testing_support::to_points;

namespace {

std::vector<double> run(const Kernel& k, const PointSet& X, const std::vector<double>& z) {
  return make_engine(k, X)->query(z);
}

void expect_matches(const std::vector<double>& got, const std::vector<double>& want, double tol,
                    const std::string& what) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i)
    EXPECT_TRUE(oracle::close(got[i], want[i], tol)) << what << " [" << i << "] " << got[i] << " vs " << want[i];
}

}  // namespace

TEST(ExactEngines, HandExamples) {
  const PointSet X = PointSet::from_rows({{0}, {1}, {3}});
  EXPECT_EQ(run(Kernel::l1(), X, {1, 1, 1}), (std::vector<double>{4, 3, 5}));
  const PointSet Y = PointSet::from_rows({{0}, {2}, {3}});
  expect_matches(run(Kernel::lpp(3), Y, {1, 1, 1}), {35, 9, 28}, 1e-12, "lpp3");
  expect_matches(run(Kernel::lpp(4), PointSet::from_rows({{0}, {1}}), {1, 1}), {1, 1}, 1e-12, "lpp4");

  const PointSet P = PointSet::from_rows({{0.5, 0.5}, {0.25, 0.75}});
  EXPECT_NEAR(run(Kernel::kl(), P, {0, 1})[0], 0.5 * std::log(4.0 / 3.0), 1e-12);
  expect_matches(run(Kernel::bhattacharyya(), PointSet::from_rows({{0.5, 0.5}, {0.5, 0.5}}), {1, 1}), {2, 2},
                 1e-12, "bhattacharyya");

  EXPECT_NEAR(run(Kernel::mixed_linf(), PointSet::from_rows({{0, 5}, {2, 3}}), {0, 1})[0], 3.0, 1e-12);
  expect_matches(run(Kernel::poly(2), PointSet::from_rows({{1, 0}, {0, 1}, {1, 1}}), {1, 1, 1}), {2, 2, 6}, 1e-12,
                 "poly2");
  const PointSet same = PointSet::from_rows({{0.2, 0.8}, {0.2, 0.8}, {0.2, 0.8}});
  for (double v : run(Kernel::kl(), same, {1, -2, 0.5})) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(ExactEngines, ZeroQueryGivesZero) {
  oracle::Gen g(1);
  const PointSet X = to_points(g.gaussian(9, 3));
  const PointSet S = to_points(g.simplex(9, 3));
  const std::vector<double> zero(9, 0.0);
  for (const std::string name : {"l1", "lpp", "l2sq", "mixedlinf", "gram", "poly"})
    for (double v : run(parse_kernel(name, 3, 3), X, zero)) EXPECT_EQ(v, 0.0) << name;
  for (const std::string name : {"tv", "kl", "symkl", "crossentropy", "bhattacharyya"})
    for (double v : run(parse_kernel(name, 1, 3), S, zero)) EXPECT_EQ(v, 0.0) << name;
}

TEST(ExactEngines, AgreeWithOracleOnRandomInstances) {
  oracle::Gen g(2024);
  const std::vector<std::pair<std::string, int>> kernels{
      {"l1", 1},    {"lpp", 1},   {"lpp", 2},   {"lpp", 3},   {"lpp", 4},    {"lpp", 5},
      {"l2sq", 2},  {"tv", 1},    {"kl", 1},    {"symkl", 1}, {"crossentropy", 1}, {"bhattacharyya", 1},
      {"mixedlinf", 1}, {"mahalanobis", 1}, {"poly", 1}, {"poly", 2}, {"poly", 3}};
  for (int trial = 0; trial < 8; ++trial)
    for (const auto& [name, p] : kernels) {
      const std::size_t n = g.integer(1, 40), d = g.integer(1, 8);
      const bool dist = name == "tv" || name == "kl" || name == "symkl" || name == "crossentropy" ||
                        name == "bhattacharyya";
      const auto rows = dist ? g.simplex(n, d) : g.gaussian(n, d, 2.0);
      const auto z = g.vec(n);
      Eigen::MatrixXd M = Eigen::MatrixXd::Random(Eigen::Index(d), Eigen::Index(d));
      const Kernel k = name == "mahalanobis" ? Kernel::mahalanobis(M) : parse_kernel(name, p, d);
      expect_matches(run(k, to_points(rows), z), oracle::matvec(name, rows, z, p, &M), 1e-9,
                     name + std::to_string(p));
    }
}

TEST(ExactEngines, TiesAndDuplicates) {
  const PointSet X = PointSet::from_rows({{1, 2}, {1, 2}, {1, 0}, {3, 2}, {1, 2}});
  const auto rows = testing_support::to_rows(X);
  const std::vector<double> z{1, -1, 2, 0.5, 3};
  for (int p : {1, 3, 5}) expect_matches(run(Kernel::lpp(p), X, z), oracle::matvec("lpp", rows, z, p), 1e-12, "ties");
}

TEST(ExactEngines, LinearityAndSymmetry) {
  oracle::Gen g(77);
  const PointSet X = to_points(g.gaussian(30, 5));
  const PointSet S = to_points(g.simplex(30, 5));
  const auto z1 = g.vec(30), z2 = g.vec(30);
  const double alpha = -1.7;
  std::vector<double> mix(30);
  for (std::size_t i = 0; i < 30; ++i) mix[i] = z1[i] + alpha * z2[i];
  for (const std::string name : {"l1", "lpp", "l2sq", "mixedlinf", "gram", "poly", "tv", "kl", "symkl",
                                 "crossentropy", "bhattacharyya"}) {
    const bool dist = name == "tv" || name == "kl" || name == "symkl" || name == "crossentropy" ||
                      name == "bhattacharyya";
    const Kernel k = parse_kernel(name, 3, 5);
    const auto e = make_engine(k, dist ? S : X);
    const auto a = e->query(z1), b = e->query(z2), c = e->query(mix);
    double scale = 1.0;
    for (std::size_t i = 0; i < 30; ++i) scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
    for (std::size_t i = 0; i < 30; ++i) EXPECT_NEAR(c[i], a[i] + alpha * b[i], 1e-9 * scale) << name;
    if (k.symmetric()) {
      double s12 = 0.0, s21 = 0.0;
      for (std::size_t i = 0; i < 30; ++i) {
        s12 += z1[i] * b[i];
        s21 += z2[i] * a[i];
      }
      EXPECT_NEAR(s12, s21, 1e-9 * std::max(1.0, std::abs(s12))) << name;
    }
  }
}

TEST(ExactEngines, LppScalesWithPower) {
  oracle::Gen g(8);
  const auto rows = g.integers(12, 3, 6);
  auto scaled = rows;
  for (auto& r : scaled)
    for (auto& v : r) v *= 3;
  const auto z = g.integers(1, 12, 4)[0];
  for (int p = 1; p <= 5; ++p) {
    const auto a = run(Kernel::lpp(p), to_points(rows), z);
    const auto b = run(Kernel::lpp(p), to_points(scaled), z);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_DOUBLE_EQ(b[i], oracle::pw(3, p) * a[i]) << p;
  }
}

TEST(ExactEngines, Errors) {
  const PointSet P = PointSet::from_rows({{0.0, 1.0}, {0.5, 0.5}});
  EXPECT_THROW(make_engine(Kernel::kl(), P), DomainError);
  EXPECT_NO_THROW(make_engine(Kernel::kl(ProbabilityMode::clamp), P)->query(std::vector<double>{1, 1}));
  EXPECT_THROW(make_engine(Kernel::bhattacharyya(), PointSet::from_rows({{-1.0, 2.0}})), DomainError);
  EXPECT_THROW(make_engine(Kernel::l1(), P)->query(std::vector<double>{1}), DimensionError);
  EXPECT_THROW(make_engine(Kernel::mahalanobis(Eigen::MatrixXd::Identity(3, 3)), P), DimensionError);
  const PointSet wide(2, 40, std::vector<double>(80, 1.0));
  EXPECT_THROW(poly_kernel_matvec(wide, std::vector<double>{1, 1}, 6, 1e5), BudgetError);
  EXPECT_THROW(check_power_range(PointSet::from_rows({{1e200}}), 3), BudgetError);
  EXPECT_THROW(ExactEngine(Kernel::linf(), std::make_shared<const PointSet>(P)), DomainError);
}

TEST(ExactEngines, SpecialCasesAgree) {
  oracle::Gen g(31);
  const PointSet X = to_points(g.gaussian(25, 4));
  const auto z = g.vec(25);
  const auto idx = build_sorted_index(X);
  expect_matches(lpp_odd_matvec(idx, X, z, 1), l1_matvec(idx, X, z), 1e-10, "p=1 vs l1");
  expect_matches(lpp_even_matvec(X, z, 2), l2sq_matvec(X, z), 1e-10, "p=2 vs l2sq");
  const auto gram = mahalanobis_matvec(build_maha_index(X, Eigen::MatrixXd::Identity(4, 4)), X, z);
  expect_matches(poly_kernel_matvec(X, z, 1), gram, 1e-10, "poly1 vs gram");
  for (double v : mahalanobis_matvec(build_maha_index(X, Eigen::MatrixXd::Zero(4, 4)), X, z)) EXPECT_EQ(v, 0.0);
}

TEST(SortedIndex, PermutationAndRanks) {
  const PointSet X = PointSet::from_rows({{3, 1}, {1, 1}, {2, 0}, {1, 5}});
  const SortedIndex idx = build_sorted_index(X);
  for (std::size_t i = 0; i < X.d(); ++i) {
    const auto perm = idx.perm(i);
    const auto rank = idx.ranks(i);
    for (std::size_t r = 0; r + 1 < X.n(); ++r) {
      EXPECT_LE(X(perm[r], i), X(perm[r + 1], i));
      if (X(perm[r], i) == X(perm[r + 1], i)) EXPECT_LT(perm[r], perm[r + 1]);
    }
    for (std::size_t k = 0; k < X.n(); ++k) EXPECT_EQ(perm[rank[k]], k);
  }
  EXPECT_EQ(idx.perm(0)[0], 1u);
  EXPECT_EQ(idx.perm(0)[1], 3u);
}

TEST(Monomials, CountsAndPowerSum) {
  EXPECT_EQ(monomial_count(3, 2), 6.0);
  EXPECT_EQ(monomial_count(8, 3), 120.0);
  EXPECT_EQ(monomial_count(5, 0), 1.0);
  const MonomialExpansion m(3, 2);
  EXPECT_EQ(m.size(), 6u);
  double total = 0.0;
  for (double c : m.multinomials()) total += c;
  EXPECT_EQ(total, 9.0);  // (1 + 1 + 1)^2

  oracle::Gen g(4);
  const auto U = g.gaussian(4, 3), V = g.gaussian(5, 3);
  std::vector<double> u, v;
  for (const auto& r : U) u.insert(u.end(), r.begin(), r.end());
  for (const auto& r : V) v.insert(v.end(), r.begin(), r.end());
  const auto z = g.vec(5);
  std::vector<double> out(4, 0.0);
  const MonomialExpansion cube(3, 3);
  cube.power_sum(u.data(), 4, v.data(), 5, z, 2.0, out);
  for (std::size_t k = 0; k < 4; ++k) {
    double want = 0.0;
    for (std::size_t j = 0; j < 5; ++j) want += z[j] * oracle::pw(U[k][0] * V[j][0] + U[k][1] * V[j][1] + U[k][2] * V[j][2], 3);
    EXPECT_NEAR(out[k], 2.0 * want, 1e-10);
  }
  EXPECT_THROW(MonomialExpansion(50, 6, 1e6), BudgetError);
}
