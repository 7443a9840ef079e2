// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Every reference value comes from support/oracles.hpp.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>

#include "dmx/approx/embedding.hpp"
#include "dmx/approx/linf_binary.hpp"
#include "dmx/approx/threshold.hpp"
#include "dmx/builder/compression_tree.hpp"
#include "dmx/builder/linf_matrix.hpp"
#include "dmx/builder/matrix_builder.hpp"
#include "dmx/builder/packed_tree.hpp"
#include "dmx/builder/row_distances.hpp"
#include "dmx/cli/datasets.hpp"
#include "dmx/cli/ovp.hpp"
#include "dmx/engine.hpp"
#include "dmx/linalg/matfree.hpp"
#include "dmx/naive.hpp"
#include "support/convert.hpp"

using namespace dmx;
using testing_support::to_eigen;
using testing_support::to_points;
using testing_support::to_rows;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::shared_ptr<const PointSet> shared(const oracle::Rows& rows) {
  return std::make_shared<const PointSet>(to_points(rows));
}

// Entries of the engine's matrix, one e_j query per column.
Eigen::MatrixXd columns(const MatVecEngine& e) {
  return matmul_via_matvec(e, Eigen::MatrixXd::Identity(long(e.size()), long(e.size())));
}

Outcome c1_exact_oracle() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, int>> kernels{
      {"l1", 1},    {"lpp", 2},   {"lpp", 3},          {"lpp", 4},          {"lpp", 5},
      {"l2sq", 2},  {"tv", 1},    {"kl", 1},           {"symkl", 1},        {"crossentropy", 1},
      {"bhattacharyya", 1},       {"mixedlinf", 1},    {"mahalanobis", 1},  {"poly", 1},
      {"poly", 2},  {"poly", 3}};
  oracle::Gen g(1);
  std::size_t instances = 0, bad = 0;
  double worst = 0.0;
  std::string worst_kernel;
  for (const auto& [name, p] : kernels)
    for (int t = 0; t < 1000; ++t) {
      const std::size_t n = g.integer(1, 64), d = g.integer(1, 8);
      const bool dist = name == "tv" || name == "kl" || name == "symkl" || name == "crossentropy" ||
                        name == "bhattacharyya";
      oracle::Rows rows = dist ? g.simplex(n, d) : (t % 4 == 0 ? g.integers(n, d, 9) : g.gaussian(n, d, 2.0));
      const auto z = g.vec(n);
      Eigen::MatrixXd M(static_cast<long>(d), static_cast<long>(d));
      for (long i = 0; i < M.size(); ++i) M.data()[i] = g.normal();
      const Kernel k = name == "mahalanobis" ? Kernel::mahalanobis(M) : parse_kernel(name, p, d);
      const auto got = make_engine(k, shared(rows))->query(z);
      const auto want = oracle::matvec(name, rows, z, p, &M);
      ++instances;
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) {
        // error as a fraction of the allowance max(1e-9 |want|, 1e-12)
        const double rel = std::abs(got[i] - want[i]) / std::max(1e-9 * std::abs(want[i]), 1e-12);
        if (rel > worst) {
          worst = rel;
          worst_kernel = name + std::to_string(p);
        }
        ok &= oracle::close(got[i], want[i], 1e-9);
      }
      bad += !ok;
    }
  const double secs = since(t0);
  return {bad == 0 && secs < 120.0,
          fmt("%zu instances, %zu mismatched, worst error %.3f of the allowance (%s), %.1f s", instances, bad, worst,
              worst_kernel.c_str(), secs)};
}

Outcome c2_l1_speed() {
  const auto t0 = Clock::now();
  auto X = std::make_shared<const PointSet>(cli::gaussian_mixture(20000, 50, 2));
  const auto z = cli::gaussian_vector(X->n(), 3);
  const auto fast = make_engine(Kernel::l1(), X);
  std::vector<double> times;
  std::vector<double> y;
  for (int t = 0; t < 5; ++t) {
    const auto q0 = Clock::now();
    y = fast->query(z);
    times.push_back(since(q0));
  }
  std::sort(times.begin(), times.end());
  const NaiveEngine naive(Kernel::l1(), X);
  const auto n0 = Clock::now();
  const auto ref = naive.query(z);
  const double naive_s = since(n0);
  double dev = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) dev = std::max(dev, std::abs(y[i] - ref[i]) / std::max(1.0, std::abs(ref[i])));
  const double ratio = naive_s / times[2];
  const double secs = since(t0);
  return {ratio >= 20.0 && dev <= 1e-9 && secs < 300.0,
          fmt("naive %.2f s, fast median %.4f s, ratio %.0fx, deviation %.1e, %.1f s", naive_s, times[2], ratio, dev,
              secs)};
}

Outcome c3_l2_approx() {
  double frac_sum = 0.0, frac_min = 1.0;
  for (int s = 0; s < 20; ++s) {
    const PointSet X = cli::gaussian_mixture(100, 16, 100 + std::uint64_t(s));
    const auto rows = to_rows(X);
    const L2ApproxEngine e(X, 0.2, 500 + std::uint64_t(s));
    const Eigen::MatrixXd B = columns(e);
    std::size_t good = 0, total = 0;
    for (std::size_t i = 0; i < 100; ++i)
      for (std::size_t j = 0; j < 100; ++j) {
        if (i == j) continue;
        ++total;
        good += std::abs(B(long(i), long(j)) / oracle::f("l2", rows[i], rows[j]) - 1.0) <= 0.25;
      }
    const double frac = double(good) / double(total);
    frac_sum += frac;
    frac_min = std::min(frac_min, frac);
  }
  const double mean = frac_sum / 20.0;
  return {mean >= 0.95, fmt("mean fraction within 1+-0.25: %.4f (worst seed %.4f)", mean, frac_min)};
}

Outcome c4_linf_binary() {
  oracle::Gen g(4);
  bool ok = true;
  std::string detail;
  for (int d : {4, 6, 8})
    for (double eps : {0.25, 0.1}) {
      const auto rows = g.integers(64, std::size_t(d), 1);
      const LinfBinaryEngine e(shared(rows), eps);
      const Eigen::MatrixXd B = columns(e);
      double dev = 0.0;
      for (std::size_t i = 0; i < 64; ++i)
        for (std::size_t j = 0; j < 64; ++j)
          dev = std::max(dev, std::abs(B(long(i), long(j)) - oracle::f("linf", rows[i], rows[j])));
      const int q = e.polynomial().degree;
      const double cap = 4.0 * std::sqrt(double(d)) * std::log(1.0 / eps);
      ok &= dev <= eps && q <= cap;
      detail += fmt("d=%d eps=%.2f: dev %.3f deg %d<=%.1f; ", d, eps, dev, q, cap);
    }
  return {ok, detail};
}

Outcome c5_bounded_estimator() {
  const BoundedLinfEstimator est(2, 4, 0.25);
  std::vector<std::vector<double>> all;
  for (int c = 0; c < 81; ++c) all.push_back({double(c % 3), double(c / 3 % 3), double(c / 9 % 3), double(c / 27)});
  double worst = 0.0;
  for (const auto& x : all)
    for (const auto& y : all) worst = std::max(worst, std::abs(est(x, y) - oracle::f("linf", x, y)));
  return {worst <= 0.25, fmt("6561 pairs, max |estimate - truth| = %.2e", worst)};
}

Outcome c6_lowrank() {
  int passed = 0;
  double worst = 0.0;
  for (const char* name : {"l1", "l2sq"})
    for (int s = 0; s < 10; ++s) {
      const PointSet X = cli::gaussian_mixture(300, 16, 600 + std::uint64_t(s));
      const auto rows = to_rows(X);
      const auto e = make_engine(parse_kernel(name, 2, 16), X);
      const LowRankFactors F = block_krylov_lowrank(*e, 10, 0.5, 60 + std::uint64_t(s));
      const Eigen::MatrixXd A = oracle::matrix(name, rows);
      const double ratio = (A - A * F.Z * F.Z.transpose()).norm() / oracle::best_rank_k_error(A, 10);
      worst = std::max(worst, ratio);
      passed += ratio <= 1.5;
    }
  return {passed == 20, fmt("%d/20 runs (l1 and l2sq, 10 seeds each), worst ratio %.4f", passed, worst)};
}

Outcome c7_singular_values() {
  int passed = 0;
  double worst = 0.0;
  for (const char* name : {"l2sq", "l1"})
    for (int s = 0; s < 10; ++s) {
      const PointSet X = cli::gaussian_mixture(200, 8, 700 + std::uint64_t(s));
      const auto e = make_engine(parse_kernel(name, 2, 8), X);
      const auto sv = topk_singular_values(*e, 5, 0.2, 70 + std::uint64_t(s));
      const Eigen::VectorXd ref = oracle::singular_values(oracle::matrix(name, to_rows(X)));
      bool ok = true;
      for (std::size_t i = 0; i < 5; ++i) {
        const double r = std::abs(sv[i] / ref(long(i)) - 1.0);
        worst = std::max(worst, r);
        ok &= r <= 0.2;
      }
      passed += ok;
    }
  return {passed == 20, fmt("%d/20 runs (l2sq and l1, 10 seeds each), worst relative error %.2e", passed, worst)};
}

Outcome c8_cg() {
  const long n = 100;
  oracle::Gen g(8);
  bool ok = true;
  std::string detail;
  for (double kappa : {1.0, 1e2, 1e4}) {
    // X = Q diag(s) has gram X X^T = Q diag(s^2) Q^T with condition number kappa
    Eigen::MatrixXd G(n, n);
    for (long i = 0; i < G.size(); ++i) G.data()[i] = g.normal();
    const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();
    Eigen::VectorXd s(n);
    for (long i = 0; i < n; ++i) s(i) = std::pow(kappa, -0.5 * double(i) / double(n - 1));
    const Eigen::MatrixXd X = Q * s.asDiagonal();
    oracle::Rows rows(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) rows[std::size_t(i)][std::size_t(j)] = X(i, j);
    const Eigen::MatrixXd A = oracle::matrix("gram", rows);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
    const auto b = g.vec(std::size_t(n));
    const auto e = make_engine(Kernel::gram(std::size_t(n)), shared(rows));
    const CgResult r = cg_solve(*e, b, 1e-6, std::size_t(n));
    const Eigen::Map<const Eigen::VectorXd> x(r.x.data(), n), bv(b.data(), n);
    const double res = (A * x - bv).norm() / bv.norm();
    ok &= r.converged && res <= 1e-6 && r.iterations <= std::size_t(n);
    detail += fmt("kappa %.0e: %zu iterations, residual %.1e; ", cond, r.iterations, res);
  }
  return {ok, detail};
}

Outcome c9_matmul() {
  oracle::Gen g(9);
  double worst = 0.0;
  const std::vector<std::pair<std::string, int>> kernels{{"l1", 1}, {"lpp", 3}, {"lpp", 4}, {"l2sq", 2},
                                                         {"mixedlinf", 1}, {"poly", 2}, {"kl", 1}, {"bhattacharyya", 1}};
  for (const auto& [name, p] : kernels) {
    const bool dist = name == "kl" || name == "bhattacharyya";
    const auto rows = dist ? g.simplex(64, 6) : g.gaussian(64, 6);
    const Kernel k = parse_kernel(name, p, 6);
    const Eigen::MatrixXd got = matmul_via_matvec(*make_engine(k, shared(rows)), Eigen::MatrixXd::Identity(64, 64));
    const Eigen::MatrixXd naive = to_eigen(naive_matrix(k, to_points(rows)));
    const Eigen::MatrixXd want = oracle::matrix(name, rows, p);
    const double scale = std::max(1.0, want.cwiseAbs().maxCoeff());
    worst = std::max({worst, (got - naive).cwiseAbs().maxCoeff() / scale, (naive - want).cwiseAbs().maxCoeff() / scale});
  }
  const auto X = g.gaussian(64, 5), Y = g.gaussian(64, 3);
  const Eigen::MatrixXd dense = oracle::matrix("l2sq", X) * oracle::matrix("l2sq", Y);
  const double pair = (l2sq_pair_product(to_points(X), to_points(Y)) - dense).norm() / dense.norm();
  return {worst <= 1e-9 && pair <= 1e-8,
          fmt("matmul vs naive max error %.1e over 8 kernels, pair product relative Frobenius %.1e", worst, pair)};
}

Outcome c10_compression_tree() {
  const PointSet X = cli::gaussian_mixture(500, 16, 10);
  const auto rows = to_rows(X);
  const double eps = 0.25;
  BuildOptions ref_opts, packed_opts;
  ref_opts.path = RowPath::reference;
  packed_opts.path = RowPath::packed;
  BuildReport rep;
  const DistanceMatrix B = approx_l1_matrix(X, eps, 7, ref_opts, &rep);
  double worst = 0.0;
  for (std::size_t i = 0; i < 500; ++i)
    for (std::size_t j = 0; j < 500; ++j)
      if (i != j) worst = std::max(worst, std::abs(B(i, j) / oracle::f("l1", rows[i], rows[j]) - 1.0));
  const bool matrices_equal = approx_l1_matrix(X, eps, 7, packed_opts) == B;

  // row-level dual path on every tree of the forest, with the lookup table when one fits
  const Forest F = build_forest(X, eps, 7);
  std::size_t rows_checked = 0, rows_differ = 0;
  for (const auto& T : F.trees)
    for (int P : {default_tracked_depth(T), 4}) {
      const PackLayout layout = pack_layout(T.d, T.n, P, P == 4 ? std::optional<int>(8) : std::nullopt);
      const PackedTree PT = pack_tree(T, layout);
      std::optional<LookupTable> table;
      if (layout.table_backed) table = build_lookup_table(layout);
      std::vector<double> a(500), b(500);
      for (std::size_t i = 0; i < 500; ++i) {
        reference_row(T, i, P, a);
        packed_row(T, PT, table ? &*table : nullptr, i, b);
        ++rows_checked;
        rows_differ += a != b;
      }
    }

  const GridPoints G = quantize(X);
  TreeParams tp;
  tp.eps = eps;
  tp.delta = 0.25;
  double padded = 0.0;
  for (int t = 0; t < 100; ++t) {
    const CompressionTree T = build_compression_tree(G, tp, 1000 + std::uint64_t(t));
    for (std::size_t i = 0; i < 500; ++i) padded += padded_check(T, i);
  }
  const double rate = padded / 50000.0;
  return {worst <= eps && matrices_equal && rows_differ == 0 && rate >= 0.70,
          fmt("max relative error %.2e, packed matrix %s, %zu/%zu rows bit-exact, padding rate %.4f over 100 trees",
              worst, matrices_equal ? "identical" : "DIFFERS", rows_checked - rows_differ, rows_checked, rate)};
}

Outcome c11_builder_speed() {
  const PointSet X = cli::gaussian_mixture(20000, 64, 11);
  double naive_s = 0.0;
  {
    const auto t0 = Clock::now();
    const DistanceMatrix A = naive_matrix(Kernel::l1(), X);
    naive_s = since(t0);
  }
  const auto t0 = Clock::now();
  BuildReport rep;
  const DistanceMatrix B = approx_l1_matrix(X, 0.25, 11, {}, &rep);
  const double approx_s = since(t0);
  // spot check against the definition
  oracle::Gen g(11);
  const auto rows = to_rows(X);
  double worst = 0.0;
  for (int t = 0; t < 20000; ++t) {
    const std::size_t i = g.integer(0, 19999), j = g.integer(0, 19999);
    if (i != j) worst = std::max(worst, std::abs(B(i, j) / oracle::f("l1", rows[i], rows[j]) - 1.0));
  }
  return {approx_s < naive_s && worst <= 0.25,
          fmt("approx %.2f s (%zu trees, %s path) vs naive %.2f s, sampled max relative error %.2e", approx_s,
              rep.trees, rep.path.c_str(), naive_s, worst)};
}

Outcome c12_linf_exact() {
  oracle::Gen g(12);
  int equal = 0;
  for (int t = 0; t < 100; ++t) {
    const int M = int(g.integer(1, 3));
    const std::size_t n = g.integer(1, 128), d = g.integer(1, 32);
    auto rows = g.integers(n, d, M);
    rows[0][0] = M;  // alphabet bound detection sees M
    const DistanceMatrix B = linf_matrix_bounded(to_points(rows), LinfMode::exact);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j) ok = B(i, j) == oracle::f("linf", rows[i], rows[j]);
    equal += ok;
  }
  return {equal == 100, fmt("%d/100 instances exactly equal", equal)};
}

Outcome c13_ovp() {
  oracle::Gen g(13);
  int agree = 0, positives = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t na = g.integer(1, 64), nb = g.integer(1, 64), d = g.integer(1, 16);
    const double density = g.uniform(0.2, 0.9);
    auto draw = [&](std::size_t n) {
      oracle::Rows R(n, std::vector<double>(d));
      for (auto& r : R) {
        do {
          for (auto& v : r) v = g.uniform() < density ? 1.0 : 0.0;
        } while (std::all_of(r.begin(), r.end(), [](double v) { return v == 0.0; }));
      }
      return R;
    };
    auto A = draw(na), B = draw(nb);
    if (t % 3 == 0 && d >= 2) {
      // plant a disjoint-support pair
      auto& a = A[g.integer(0, na - 1)];
      auto& b = B[g.integer(0, nb - 1)];
      const std::size_t cut = g.integer(1, d - 1);
      for (std::size_t c = 0; c < d; ++c) {
        a[c] = c < cut ? double(c == 0 || g.uniform() < 0.5) : 0.0;
        b[c] = c >= cut ? double(c == cut || g.uniform() < 0.5) : 0.0;
      }
    }
    const bool truth = oracle::ovp(A, B);
    positives += truth;
    agree += cli::ovp_reduction(to_points(A), to_points(B)).orthogonal_pair == truth;
  }
  return {agree == 500, fmt("%d/500 verdicts match brute force (%d with an orthogonal pair)", agree, positives)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exact engines match the oracle on every kernel", c1_exact_oracle},
      {"l1 fast query at least 20x faster than naive", c2_l1_speed},
      {"l2 approximate engine entries within 1+-0.25", c3_l2_approx},
      {"binary l-inf engine within eps, degree bound", c4_linf_binary},
      {"bounded-alphabet estimator within eps", c5_bounded_estimator},
      {"low-rank projection within 1+eps of best rank k", c6_lowrank},
      {"top-k singular values within 1+-eps", c7_singular_values},
      {"CG reaches 1e-6 within n iterations", c8_cg},
      {"matmul via matvec and l2sq pair product", c9_matmul},
      {"compression-tree matrix, dual path, padding rate", c10_compression_tree},
      {"approximate l1 matrix faster than naive", c11_builder_speed},
      {"exact l-inf builder equals naive", c12_linf_exact},
      {"OVP verdicts match brute force", c13_ovp},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %zu: %s -- %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures ? 1 : 0;
}
