#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "dmx/distance_matrix.hpp"
#include "dmx/error.hpp"
#include "dmx/kernel.hpp"
#include "dmx/naive.hpp"
#include "dmx/point_set.hpp"
#include "support/convert.hpp"

using namespace dmx;
using testing_support::to_points;

TEST(PointSet, ParsesTextAndDetectsAlphabet) {
  const PointSet X = parse_points("2 3\n0 1 2\n3 4 5\n", PointFormat::text);
  EXPECT_EQ(X.n(), 2u);
  EXPECT_EQ(X.d(), 3u);
  EXPECT_EQ(X(1, 2), 5.0);
  ASSERT_TRUE(X.alphabet_bound());
  EXPECT_EQ(*X.alphabet_bound(), 5);
  EXPECT_FALSE(X.is_binary());

  const PointSet Y = parse_points("1 2\n0.5 1\n", PointFormat::text);
  EXPECT_FALSE(Y.alphabet_bound());
  EXPECT_TRUE(parse_points("2 2\n0 1\n1 1\n", PointFormat::text).is_binary());
  EXPECT_FALSE(parse_points("1 2\n-1 1\n", PointFormat::text).alphabet_bound());
}

TEST(PointSet, ReportsMalformedInputWithRow) {
  EXPECT_THROW(parse_points("", PointFormat::text), ParseError);
  try {
    parse_points("", PointFormat::text);
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("malformed header"), std::string::npos);
    EXPECT_FALSE(e.row());
  }
  try {
    parse_points("3 2\n1 2\n3\n5 6\n", PointFormat::text);
    FAIL();
  } catch (const ParseError& e) {
    ASSERT_TRUE(e.row());
    EXPECT_EQ(*e.row(), 1u);
  }
  try {
    parse_points("2 1\n1\nnan\n", PointFormat::text);
    FAIL();
  } catch (const ParseError& e) {
    ASSERT_TRUE(e.row());
    EXPECT_EQ(*e.row(), 1u);
  }
  EXPECT_THROW(parse_points("3 1\n1\n2\n", PointFormat::text), ParseError);
  EXPECT_THROW(parse_points("0 1\n", PointFormat::text), ParseError);
  EXPECT_THROW(parse_points("DMAT1", PointFormat::binary), ParseError);
}

TEST(PointSet, BinaryRoundTripIsBitExact) {
  oracle::Gen g(3);
  const PointSet X = to_points(g.gaussian(37, 5, 1e3));
  const std::string bytes = serialize_points(X, PointFormat::binary);
  EXPECT_EQ(bytes.substr(0, 5), "DMAT1");
  EXPECT_EQ(bytes.size(), 5u + 16u + 37u * 5u * 8u);
  EXPECT_EQ(parse_points(bytes, PointFormat::binary), X);

  const auto path = std::filesystem::temp_directory_path() / "dmx_core_roundtrip.dmat";
  store_points(X, path, PointFormat::binary);
  EXPECT_EQ(load_points(path), X);
  store_points(X, path, PointFormat::text);
  EXPECT_EQ(load_points(path), X);
  std::filesystem::remove(path);
}

TEST(Kernel, ValuesMatchDefinitions) {
  oracle::Gen g(5);
  const auto P = g.simplex(2, 6);
  const auto G = g.gaussian(2, 6);
  struct Case {
    std::string name;
    int p;
    bool simplex;
  };
  const std::vector<Case> cases{{"l1", 1, false},          {"lpp", 3, false},   {"lpp", 4, false},
                                {"l2sq", 2, false},        {"tv", 1, true},     {"kl", 1, true},
                                {"symkl", 1, true},        {"crossentropy", 1, true},
                                {"bhattacharyya", 1, true}, {"mixedlinf", 1, false}, {"gram", 1, false},
                                {"poly", 3, false},        {"l2", 1, false},    {"linf", 1, false}};
  for (const auto& c : cases) {
    const auto& R = c.simplex ? P : G;
    const Kernel k = parse_kernel(c.name, c.p, 6);
    EXPECT_NEAR(k(R[0], R[1]), oracle::f(c.name, R[0], R[1], c.p), 1e-12) << c.name;
  }
}

TEST(Kernel, FlagsAndParsing) {
  EXPECT_TRUE(Kernel::l1().symmetric());
  EXPECT_FALSE(Kernel::kl().symmetric());
  EXPECT_FALSE(Kernel::cross_entropy().symmetric());
  EXPECT_TRUE(Kernel::sym_kl().symmetric());
  EXPECT_EQ(Kernel::lpp(3).tag, KernelTag::lpp_odd);
  EXPECT_EQ(Kernel::lpp(4).tag, KernelTag::lpp_even);
  EXPECT_THROW(Kernel::lpp(0), DomainError);
  EXPECT_THROW(parse_kernel("hamming", 1, 2), DomainError);
  Eigen::MatrixXd M(2, 2);
  M << 1, 2, 0, 1;
  EXPECT_FALSE(Kernel::mahalanobis(M).symmetric());
  EXPECT_THROW(Kernel::mahalanobis(Eigen::MatrixXd::Zero(2, 3)), DimensionError);

  const std::vector<double> x{0.5, 0.5}, y{0.25, 0.75};
  EXPECT_NEAR(Kernel::sym_kl(ProbabilityMode::strict, true)(x, y), 0.5 * Kernel::sym_kl()(x, y), 1e-15);
  const std::vector<double> z{0.0, 1.0};
  EXPECT_THROW(Kernel::kl()(z, x), DomainError);
  EXPECT_TRUE(std::isfinite(Kernel::kl(ProbabilityMode::clamp)(x, z)));
}

TEST(Naive, SmallHandExamples) {
  const PointSet X = PointSet::from_rows({{0}, {1}, {3}});
  const std::vector<double> ones{1, 1, 1};
  EXPECT_EQ(naive_matvec(Kernel::l1(), X, ones), (std::vector<double>{4, 3, 5}));
  const DistanceMatrix A = naive_matrix(Kernel::l1(), X);
  EXPECT_EQ(A, DistanceMatrix(3, {0, 1, 3, 1, 0, 2, 3, 2, 0}));

  const PointSet Y = PointSet::from_rows({{0, 0}, {1, 0}, {0, 2}});
  EXPECT_EQ(naive_matvec(Kernel::l2sq(), Y, std::vector<double>{1, 0, 1}), (std::vector<double>{4, 6, 4}));
  EXPECT_EQ(naive_matvec(Kernel::l2sq(), Y, std::vector<double>{0, 0, 0}), (std::vector<double>{0, 0, 0}));

  const PointSet H = PointSet::from_rows({{0.5, 0.5}, {0.5, 0.5}});
  EXPECT_EQ(naive_matrix(Kernel::bhattacharyya(), H), DistanceMatrix(2, 1.0));
  EXPECT_EQ(naive_matrix(Kernel::l2(), PointSet::from_rows({{3, 4}})), DistanceMatrix(1, 0.0));
}

TEST(Naive, DomainAndShapeErrors) {
  const PointSet P = PointSet::from_rows({{0.0, 1.0}, {0.5, 0.5}});
  EXPECT_THROW(naive_matvec(Kernel::kl(), P, std::vector<double>{1, 1}), DomainError);
  EXPECT_NO_THROW(naive_matvec(Kernel::kl(ProbabilityMode::clamp), P, std::vector<double>{1, 1}));
  EXPECT_THROW(naive_matvec(Kernel::tv(), PointSet::from_rows({{-0.5, 1.5}}), std::vector<double>{1}),
               DomainError);
  EXPECT_THROW(naive_matvec(Kernel::l1(), P, std::vector<double>{1}), DimensionError);
}

TEST(Naive, SymmetryAndDiagonalOnRandomInputs) {
  oracle::Gen g(9);
  const PointSet X = to_points(g.gaussian(20, 4));
  const PointSet S = to_points(g.simplex(20, 4));
  for (const std::string name : {"l1", "lpp", "l2sq", "l2", "linf", "mixedlinf", "gram", "poly"}) {
    const DistanceMatrix A = naive_matrix(parse_kernel(name, 3, 4), X);
    EXPECT_TRUE(A.is_symmetric()) << name;
    if (name != "mixedlinf" && name != "gram" && name != "poly")
      for (std::size_t i = 0; i < A.n(); ++i) EXPECT_EQ(A(i, i), 0.0) << name;
  }
  for (const std::string name : {"tv", "symkl", "bhattacharyya"})
    EXPECT_TRUE(naive_matrix(parse_kernel(name, 1, 4), S).is_symmetric()) << name;
  EXPECT_FALSE(naive_matrix(Kernel::kl(), S).is_symmetric());
  // mixed l-inf vanishes on the diagonal only for constant rows
  const PointSet C = PointSet::from_rows({{2, 2, 2}, {2, 2, 2}});
  EXPECT_EQ(naive_matrix(Kernel::mixed_linf(), C), DistanceMatrix(2, 0.0));
}

TEST(DistanceMatrix, SymmetrizeMultiplyAndFormat) {
  DistanceMatrix B(3, {0, 2, 4, 0, 0, 6, 2, 2, 0});
  B.symmetrize();
  EXPECT_EQ(B, DistanceMatrix(3, {0, 1, 3, 1, 0, 4, 3, 4, 0}));
  EXPECT_EQ(B.multiply(std::vector<double>{1, 0, 1}), (std::vector<double>{3, 5, 3}));
  EXPECT_THROW(B.multiply(std::vector<double>{1}), DimensionError);

  DistanceMatrix U(70);
  for (std::size_t i = 0; i < 70; ++i)
    for (std::size_t j = i + 1; j < 70; ++j) U(i, j) = double(i * 100 + j);
  U.mirror_upper();
  EXPECT_TRUE(U.is_symmetric());
  EXPECT_EQ(U(69, 3), 369.0);

  const std::string bytes = serialize_matrix(B);
  EXPECT_EQ(bytes.substr(0, 5), "DMTX1");
  EXPECT_EQ(parse_matrix(bytes), B);
  EXPECT_THROW(parse_matrix("DMTX0"), ParseError);
  const auto path = std::filesystem::temp_directory_path() / "dmx_core_matrix.dmtx";
  store_matrix(U, path);
  EXPECT_EQ(load_matrix(path), U);
  std::filesystem::remove(path);
}
