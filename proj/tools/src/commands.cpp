#include "dmx/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>
#include <stdexcept>

#include <CLI11.hpp>
#include <Eigen/SVD>
#include <json.hpp>

#include "dmx/builder/linf_matrix.hpp"
#include "dmx/builder/matrix_builder.hpp"
#include "dmx/cli/datasets.hpp"
#include "dmx/cli/ovp.hpp"
#include "dmx/engine.hpp"
#include "dmx/error.hpp"
#include "dmx/linalg/matfree.hpp"
#include "dmx/naive.hpp"

namespace dmx::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

// Bad flag combinations found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The naive oracle is refused above this many coordinate operations per query.
constexpr double kNaiveOpsLimit = 4e11;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size()); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct Options {
  std::string kernel = "l1";
  int p = 2;
  double eps = 0.2;
  std::uint64_t seed = 1;
  std::size_t trials = 5;
  std::string input;
  std::string synthetic;
  std::size_t n = 100;
  std::size_t d = 8;
  std::int64_t M = 1;
  std::size_t components = 3;
  std::string output;
  std::string report;
  std::string format = "text";
  std::string metric;
  bool verify = false;
  bool skip_oracle = false;

  // bench
  std::string naive = "auto";
  double dense_limit_mb = 1024.0;
  // build-matrix
  std::string mode = "exact";
  double delta = 0.25;
  int tracked_depth = 0;
  int key_bits = 0;
  std::string path = "auto";
  // lowrank / singvals / solve
  std::size_t k = 10;
  double tol = 1e-6;
  std::size_t maxit = 0;
  std::string solver = "direct";
  // ovp
  std::string set_a, set_b;
};

void add_input(CLI::App* cmd, Options& o) {
  cmd->add_option("--input", o.input, "point file (text or DMAT1 binary)");
  cmd->add_option("--synthetic", o.synthetic, "generate points instead of reading them")
      ->check(CLI::IsMember(dataset_kinds()));
  cmd->add_option("--n", o.n, "number of synthetic points")->check(CLI::PositiveNumber);
  cmd->add_option("--d", o.d, "dimension of synthetic points")->check(CLI::PositiveNumber);
  cmd->add_option("--M", o.M, "alphabet bound for uniform-integer")->check(CLI::Range(0, 255));
  cmd->add_option("--components", o.components, "gaussian-mixture components")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--report", o.report, "write the JSON report here");
}

void add_kernel(CLI::App* cmd, Options& o, const std::vector<std::string>& allowed) {
  cmd->add_option("--kernel", o.kernel, "distance function")->check(CLI::IsMember(allowed));
  cmd->add_option("--p", o.p, "power for lpp and poly")->check(CLI::Range(1, 64));
  cmd->add_option("--metric", o.metric, "d x d text matrix for mahalanobis (default identity)");
  cmd->add_option("--eps", o.eps, "accuracy for approximate engines")->check(CLI::Range(1e-6, 0.999999));
}

PointSet load_input(const Options& o) {
  if (!o.input.empty() && !o.synthetic.empty()) throw UsageError("give either --input or --synthetic, not both");
  if (!o.input.empty()) return load_points(o.input);
  if (!o.synthetic.empty()) {
    DatasetSpec spec;
    spec.kind = o.synthetic;
    spec.n = o.n;
    spec.d = o.d;
    spec.seed = o.seed;
    spec.M = o.M;
    spec.components = o.components;
    return generate(spec);
  }
  throw UsageError("need --input or --synthetic");
}

Kernel make_kernel(const Options& o, std::size_t d) {
  if (o.kernel == "mahalanobis" && !o.metric.empty()) {
    const PointSet m = load_points(o.metric, PointFormat::text);
    Eigen::MatrixXd M(m.n(), m.d());
    for (std::size_t i = 0; i < m.n(); ++i)
      for (std::size_t j = 0; j < m.d(); ++j) M(Eigen::Index(i), Eigen::Index(j)) = m(i, j);
    return Kernel::mahalanobis(std::move(M));
  }
  return parse_kernel(o.kernel, o.p, d);
}

EngineOptions engine_options(const Options& o) {
  EngineOptions e;
  e.eps = o.eps;
  e.seed = o.seed;
  return e;
}

void check_oracle(const Options& o, std::size_t n, std::size_t d) {
  if (!o.skip_oracle && double(n) * double(n) * double(d) > kNaiveOpsLimit)
    throw UsageError("naive oracle infeasible at n=" + std::to_string(n) + ", d=" + std::to_string(d) +
                     "; pass --skip-oracle");
}

json config(const std::string& command, const Options& o, const PointSet& X) {
  json r;
  r["schema"] = "bench/1";
  r["command"] = command;
  r["kernel"] = o.kernel;
  r["n"] = X.n();
  r["d"] = X.d();
  r["p"] = o.p;
  r["eps"] = o.eps;
  r["seed"] = o.seed;
  return r;
}

void emit(const json& r, const Options& o, std::ostream& out) {
  if (!o.report.empty()) {
    std::ofstream f(o.report);
    if (!f) throw Error("cannot write report " + o.report);
    f << r.dump(2) << '\n';
  }
  out << r.dump(2) << '\n';
}

Eigen::MatrixXd dense(const DistanceMatrix& A) {
  const auto n = Eigen::Index(A.n());
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(A.data().data(), n,
                                                                                                 n);
}

int cmd_gen(const Options& o, std::ostream& out) {
  if (o.synthetic.empty()) throw UsageError("gen needs --gen <kind>");
  if (o.output.empty()) throw UsageError("gen needs --output");
  const PointSet X = load_input(o);
  store_points(X, o.output, o.format == "binary" ? PointFormat::binary : PointFormat::text);
  json r;
  r["schema"] = "bench/1";
  r["command"] = "gen";
  r["kind"] = o.synthetic;
  r["n"] = X.n();
  r["d"] = X.d();
  r["seed"] = o.seed;
  if (o.synthetic == "uniform-integer") r["M"] = o.M;
  r["format"] = o.format;
  r["output"] = o.output;
  emit(r, o, out);
  return kExitOk;
}

int cmd_bench(const Options& o, std::ostream& out) {
  if (o.trials < 1) throw UsageError("--trials must be at least 1");
  auto X = std::make_shared<const PointSet>(load_input(o));
  const Kernel kernel = make_kernel(o, X->d());
  const std::size_t n = X->n();
  check_oracle(o, n, X->d());

  std::vector<std::vector<double>> zs;
  for (std::size_t t = 0; t < o.trials; ++t) zs.push_back(gaussian_vector(n, o.seed * 1000003 + t + 1));

  auto t0 = Clock::now();
  const auto engine = make_engine(kernel, X, engine_options(o));
  const double pre = seconds_since(t0);
  std::vector<double> times;
  std::vector<std::vector<double>> fast;
  for (const auto& z : zs) {
    t0 = Clock::now();
    fast.push_back(engine->query(z));
    times.push_back(seconds_since(t0));
  }

  json r = config("bench", o, *X);
  r["engine"] = engine->name();
  r["trials"] = o.trials;
  r["preprocess_seconds"] = pre;
  r["query_seconds_mean"] = mean(times);
  r["query_seconds_median"] = median(times);

  if (!o.skip_oracle) {
    std::string mode = o.naive;
    if (mode == "auto") mode = double(n) * double(n) * 8.0 <= o.dense_limit_mb * 1048576.0 ? "dense" : "on-the-fly";
    std::unique_ptr<MatVecEngine> naive;
    t0 = Clock::now();
    if (mode == "dense")
      naive = std::make_unique<DenseEngine>(naive_matrix(kernel, *X), kernel.symmetric());
    else
      naive = std::make_unique<NaiveEngine>(kernel, X);
    const double naive_pre = seconds_since(t0);
    std::vector<double> naive_times;
    double max_abs = 0.0, scale = 1.0;
    for (std::size_t t = 0; t < zs.size(); ++t) {
      t0 = Clock::now();
      const auto y = naive->query(zs[t]);
      naive_times.push_back(seconds_since(t0));
      for (std::size_t i = 0; i < n; ++i) {
        max_abs = std::max(max_abs, std::abs(fast[t][i] - y[i]));
        scale = std::max(scale, std::abs(y[i]));
      }
    }
    r["naive_mode"] = mode;
    r["naive_preprocess_seconds"] = naive_pre;
    r["naive_query_seconds_mean"] = mean(naive_times);
    r["naive_query_seconds_median"] = median(naive_times);
    r["speedup"] = mean(naive_times) / std::max(mean(times), 1e-12);
    r["max_abs_deviation"] = max_abs;
    r["max_deviation"] = max_abs / scale;
  }
  emit(r, o, out);
  return kExitOk;
}

int cmd_build_matrix(const Options& o, std::ostream& out) {
  const PointSet X = load_input(o);
  json r = config("build-matrix", o, X);
  DistanceMatrix B;
  auto t0 = Clock::now();
  if (o.kernel == "linf") {
    const LinfMode mode = o.mode == "approx" ? LinfMode::approx : LinfMode::exact;
    B = linf_matrix_bounded(X, mode, o.eps);
    r["mode"] = o.mode;
    r["M"] = *X.alphabet_bound();
    r["levels"] = linf_level_plan(X.d(), *X.alphabet_bound(), mode, o.eps).size();
    r["build_seconds"] = seconds_since(t0);
  } else {
    BuildOptions bo;
    bo.delta = o.delta;
    if (o.tracked_depth > 0) bo.tracked_depth = o.tracked_depth;
    if (o.key_bits > 0) bo.key_bits = o.key_bits;
    bo.path = o.path == "reference" ? RowPath::reference : o.path == "packed" ? RowPath::packed : RowPath::automatic;
    BuildReport rep;
    B = o.kernel == "l1" ? approx_l1_matrix(X, o.eps, o.seed, bo, &rep) : approx_l2_matrix(X, o.eps, o.seed, bo, &rep);
    r["delta"] = rep.delta;
    r["lambda"] = rep.lambda;
    r["tracked_depth"] = rep.tracked_depth;
    r["words"] = rep.words;
    r["slots_per_word"] = rep.slots;
    r["key_bits"] = rep.key_bits;
    r["table_backed"] = rep.table_backed;
    r["trees"] = rep.trees;
    r["padding_rate"] = rep.padding_rate;
    r["path"] = rep.path;
    if (o.kernel == "l2") r["embed_dim"] = rep.embed_dim;
    r["build_seconds"] = rep.seconds;
  }
  if (!o.output.empty()) {
    store_matrix(B, o.output);
    r["output"] = o.output;
    std::ofstream side(o.output + ".json");
    if (!side) throw Error("cannot write sidecar " + o.output + ".json");
    side << r.dump(2) << '\n';
  }
  if (o.verify) {
    check_oracle(o, X.n(), X.d());
    t0 = Clock::now();
    const DistanceMatrix A = naive_matrix(parse_kernel(o.kernel, o.p, X.d()), X);
    r["naive_seconds"] = seconds_since(t0);
    double dev = 0.0;
    for (std::size_t i = 0; i < X.n(); ++i)
      for (std::size_t j = 0; j < X.n(); ++j) {
        const double a = A(i, j), b = B(i, j);
        if (o.kernel == "linf")
          dev = std::max(dev, std::abs(a - b));
        else if (i != j)
          dev = std::max(dev, a > 0.0 ? std::abs(b / a - 1.0) : std::abs(b));
      }
    r["deviation_kind"] = o.kernel == "linf" ? "absolute" : "relative";
    r["max_deviation"] = dev;
  }
  emit(r, o, out);
  return kExitOk;
}

int cmd_lowrank(const Options& o, std::ostream& out) {
  auto X = std::make_shared<const PointSet>(load_input(o));
  const Kernel kernel = make_kernel(o, X->d());
  const auto engine = make_engine(kernel, X, engine_options(o));
  CountingEngine counter(*engine);
  auto t0 = Clock::now();
  const LowRankFactors F = block_krylov_lowrank(counter, o.k, o.eps, o.seed);
  json r = config("lowrank", o, *X);
  r["k"] = o.k;
  r["seconds"] = seconds_since(t0);
  r["queries"] = counter.queries();
  r["block"] = F.block;
  r["depth"] = F.depth;
  r["ritz"] = std::vector<double>(F.ritz.data(), F.ritz.data() + F.ritz.size());
  if (o.verify) {
    check_oracle(o, X->n(), X->d());
    const Eigen::MatrixXd A = dense(naive_matrix(kernel, *X));
    const Eigen::MatrixXd R = A - A * F.Z * F.Z.transpose();
    const Eigen::VectorXd s = Eigen::BDCSVD<Eigen::MatrixXd>(A).singularValues();
    const double best = s.tail(s.size() - Eigen::Index(o.k)).norm();
    r["residual_fro"] = R.norm();
    r["best_rank_k_fro"] = best;
    r["ratio"] = R.norm() / std::max(best, 1e-300);
  }
  emit(r, o, out);
  return kExitOk;
}

int cmd_singvals(const Options& o, std::ostream& out) {
  auto X = std::make_shared<const PointSet>(load_input(o));
  const Kernel kernel = make_kernel(o, X->d());
  const auto engine = make_engine(kernel, X, engine_options(o));
  CountingEngine counter(*engine);
  auto t0 = Clock::now();
  const auto sv = topk_singular_values(counter, o.k, o.eps, o.seed);
  json r = config("singvals", o, *X);
  r["k"] = o.k;
  r["seconds"] = seconds_since(t0);
  r["queries"] = counter.queries();
  r["singular_values"] = sv;
  if (o.verify) {
    check_oracle(o, X->n(), X->d());
    const Eigen::VectorXd s = Eigen::BDCSVD<Eigen::MatrixXd>(dense(naive_matrix(kernel, *X))).singularValues();
    double dev = 0.0;
    std::vector<double> ref;
    for (std::size_t i = 0; i < sv.size(); ++i) {
      ref.push_back(s(Eigen::Index(i)));
      dev = std::max(dev, std::abs(sv[i] / s(Eigen::Index(i)) - 1.0));
    }
    r["dense_singular_values"] = ref;
    r["max_deviation"] = dev;
  }
  emit(r, o, out);
  return kExitOk;
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
  auto X = std::make_shared<const PointSet>(load_input(o));
  const Kernel kernel = make_kernel(o, X->d());
  const auto engine = make_engine(kernel, X, engine_options(o));
  const auto b = gaussian_vector(X->n(), o.seed + 1);
  const std::size_t maxit = o.maxit ? o.maxit : X->n();
  const CgMode mode = o.solver == "normal" ? CgMode::normal_equations : CgMode::direct;
  auto t0 = Clock::now();
  const CgResult res = cg_solve(*engine, b, o.tol, maxit, mode);
  json r = config("solve", o, *X);
  r["solver"] = o.solver;
  r["tol"] = o.tol;
  r["seconds"] = seconds_since(t0);
  r["iterations"] = res.iterations;
  r["queries"] = res.queries;
  r["relative_residual"] = res.relative_residual;
  r["converged"] = res.converged;
  if (!o.output.empty()) store_points(PointSet(res.x.size(), 1, res.x), o.output, PointFormat::text);
  emit(r, o, out);
  if (!res.converged) {
    err << "error: CG did not reach tol " << o.tol << " in " << maxit << " iterations\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_ovp(const Options& o, std::ostream& out) {
  if (o.set_a.empty() || o.set_b.empty()) throw UsageError("ovp needs --a and --b");
  const PointSet A = load_points(o.set_a), B = load_points(o.set_b);
  const OvpVerdict v = ovp_reduction(A, B);
  json r;
  r["schema"] = "bench/1";
  r["command"] = "ovp";
  r["n_a"] = A.n();
  r["n_b"] = B.n();
  r["d"] = A.d();
  r["cross_sum"] = v.cross_sum;
  r["pairs"] = v.pairs;
  r["verdict"] = v.orthogonal_pair ? "orthogonal-pair" : "none";
  if (o.verify) r["brute_force_agrees"] = ovp_brute_force(A, B) == v.orthogonal_pair;
  emit(r, o, out);
  return kExitOk;
}

}  // namespace

const std::vector<std::string>& kernel_names() {
  static const std::vector<std::string> names{"l1",   "lpp",          "l2sq",          "tv",        "kl",
                                              "symkl", "crossentropy", "bhattacharyya", "mixedlinf", "mahalanobis",
                                              "gram", "poly",         "l2",            "linf"};
  return names;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"distance matrix engines, builders and solvers", "dmx"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "write a synthetic point set");
  gen->add_option("--gen", o.synthetic, "dataset kind")->check(CLI::IsMember(dataset_kinds()))->required();
  gen->add_option("--n", o.n, "points")->check(CLI::PositiveNumber);
  gen->add_option("--d", o.d, "dimension")->check(CLI::PositiveNumber);
  gen->add_option("--M", o.M, "alphabet bound for uniform-integer")->check(CLI::Range(0, 255));
  gen->add_option("--components", o.components, "gaussian-mixture components")->check(CLI::PositiveNumber);
  gen->add_option("--seed", o.seed, "random seed");
  gen->add_option("--output", o.output, "point file to write")->required();
  gen->add_option("--format", o.format, "text or binary")->check(CLI::IsMember({"text", "binary"}));
  gen->add_option("--report", o.report, "write the JSON report here");

  auto* bench = app.add_subcommand("bench", "time the fast engine against the naive product");
  add_input(bench, o);
  add_kernel(bench, o, kernel_names());
  bench->add_option("--trials", o.trials, "query vectors")->check(CLI::PositiveNumber);
  bench->add_option("--naive", o.naive, "auto, dense or on-the-fly")
      ->check(CLI::IsMember({"auto", "dense", "on-the-fly"}));
  bench->add_option("--dense-limit-mb", o.dense_limit_mb, "largest matrix auto mode materializes");
  bench->add_flag("--skip-oracle", o.skip_oracle, "do not run the naive baseline");

  auto* build = app.add_subcommand("build-matrix", "build a full distance matrix");
  add_input(build, o);
  add_kernel(build, o, {"l1", "l2", "linf"});
  build->add_option("--output", o.output, "DMTX1 matrix file; a .json sidecar goes next to it");
  build->add_option("--mode", o.mode, "linf: exact or approx")->check(CLI::IsMember({"exact", "approx"}));
  build->add_option("--delta", o.delta, "padding failure probability")->check(CLI::Range(1e-6, 0.999999));
  build->add_option("--tracked-depth", o.tracked_depth, "levels tracked below a subtree root")
      ->check(CLI::PositiveNumber);
  build->add_option("--key-bits", o.key_bits, "lookup key width")->check(CLI::PositiveNumber);
  build->add_option("--path", o.path, "auto, reference or packed")
      ->check(CLI::IsMember({"auto", "reference", "packed"}));
  build->add_flag("--verify", o.verify, "compare with the naive matrix");
  build->add_flag("--skip-oracle", o.skip_oracle, "allow --verify beyond the naive size guard");

  auto* lowrank = app.add_subcommand("lowrank", "rank-k approximation by block Krylov");
  auto* singvals = app.add_subcommand("singvals", "top-k singular values by block Krylov");
  for (auto* cmd : {lowrank, singvals}) {
    add_input(cmd, o);
    add_kernel(cmd, o, kernel_names());
    cmd->add_option("--k", o.k, "rank")->check(CLI::PositiveNumber);
    cmd->add_flag("--verify", o.verify, "compare with a dense SVD");
    cmd->add_flag("--skip-oracle", o.skip_oracle, "allow --verify beyond the naive size guard");
  }

  auto* solve = app.add_subcommand("solve", "conjugate gradient on A x = b, b standard Gaussian");
  add_input(solve, o);
  add_kernel(solve, o, kernel_names());
  solve->add_option("--tol", o.tol, "relative residual target")->check(CLI::PositiveNumber);
  solve->add_option("--maxit", o.maxit, "iteration cap (default n)");
  solve->add_option("--solver", o.solver, "direct or normal")->check(CLI::IsMember({"direct", "normal"}));
  solve->add_option("--output", o.output, "write x here");

  auto* ovp = app.add_subcommand("ovp", "orthogonal vectors through l_inf sums");
  ovp->add_option("--a", o.set_a, "binary point file A")->required();
  ovp->add_option("--b", o.set_b, "binary point file B")->required();
  ovp->add_flag("--verify", o.verify, "also run brute force");
  ovp->add_option("--report", o.report, "write the JSON report here");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(o, out);
    if (bench->parsed()) return cmd_bench(o, out);
    if (build->parsed()) return cmd_build_matrix(o, out);
    if (lowrank->parsed()) return cmd_lowrank(o, out);
    if (singvals->parsed()) return cmd_singvals(o, out);
    if (solve->parsed()) return cmd_solve(o, out, err);
    if (ovp->parsed()) return cmd_ovp(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace dmx::cli
