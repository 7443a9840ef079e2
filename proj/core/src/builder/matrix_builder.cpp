#include "dmx/builder/matrix_builder.hpp"

#include <algorithm>
#include <chrono>
#include <span>

#include "dmx/approx/embedding.hpp"
#include "dmx/builder/row_distances.hpp"
#include "dmx/error.hpp"

namespace dmx {

namespace {

DistanceMatrix build_l1(const PointSet& X, double eps, std::uint64_t seed, const BuildOptions& opts,
                        BuildReport& rep) {
  const std::size_t n = X.n();
  rep.eps = eps;
  rep.delta = opts.delta;
  if (n == 1) {
    rep.path = "trivial";
    rep.trees = 0;
    return DistanceMatrix(1);
  }
  ForestParams fp;
  fp.delta = opts.delta;
  fp.log2_aspect = opts.log2_aspect;
  fp.max_trees = opts.max_trees;
  Forest F = build_forest(X, eps, seed, fp);
  const int P = opts.tracked_depth.value_or(2 * F.lambda);
  const PackLayout layout = pack_layout(X.d(), n, P, opts.key_bits);

  bool packed = false;
  switch (opts.path) {
    case RowPath::automatic: packed = layout.table_backed; break;
    case RowPath::reference: packed = false; break;
    case RowPath::packed:
      if (!layout.packable) throw DomainError("tracked depth too large for packed words");
      packed = true;
      break;
  }
  rep.lambda = F.lambda;
  rep.tracked_depth = P;
  rep.words = layout.w;
  rep.slots = layout.f;
  rep.key_bits = layout.key_bits;
  rep.table_backed = packed && layout.table_backed;
  rep.trees = F.trees.size();
  rep.padding_rate = F.padding_rate;
  rep.path = !packed ? "reference" : rep.table_backed ? "table" : "packed";

  DistanceMatrix B(n);
  if (packed) {
    std::vector<PackedTree> pts;
    for (const auto& T : F.trees) pts.push_back(pack_tree(T, layout));
    std::optional<LookupTable> table;
    if (rep.table_backed) table = build_lookup_table(layout);
    for (std::size_t i = 0; i < n; ++i) {
      const auto t = F.assignment[i];
      packed_row(F.trees[t], pts[t], table ? &*table : nullptr, i, B.row(i));
    }
  } else {
    // Within a tree a row only covers the leaves after its own, so each
    // same-tree pair is computed once; pairs across trees come from both rows.
    constexpr std::size_t kBatch = 256;
    std::vector<double*> ptrs;
    for (std::size_t t = 0; t < F.trees.size(); ++t) {
      const auto& T = F.trees[t];
      std::vector<std::uint32_t> rows, before;
      for (std::size_t i = 0; i < n; ++i)
        if (F.assignment[i] == t) rows.push_back(static_cast<std::uint32_t>(i));
      for (std::uint32_t pos = 0; pos < n; ++pos)
        if (F.assignment[T.leaf_points[pos]] != t) before.push_back(pos);
      for (std::size_t b = 0; b < rows.size(); b += kBatch) {
        std::span<const std::uint32_t> batch(rows.data() + b, std::min(kBatch, rows.size() - b));
        ptrs.clear();
        for (auto i : batch) ptrs.push_back(B.row(i).data());
        reference_rows(T, batch, P, std::span<double* const>(ptrs), &before);
      }
    }
    // entries a row skipped are exactly zero, so x + 0 keeps the one value
    constexpr std::size_t kTile = 32;
    const auto& tree = F.assignment;
    for (std::size_t i0 = 0; i0 < n; i0 += kTile)
      for (std::size_t j0 = i0; j0 < n; j0 += kTile)
        for (std::size_t i = i0; i < std::min(n, i0 + kTile); ++i) {
          double* bi = B.row(i).data();
          for (std::size_t j = std::max(j0, i + 1); j < std::min(n, j0 + kTile); ++j) {
            const double v = (tree[i] != tree[j] ? 0.5 : 1.0) * (bi[j] + B(j, i));
            bi[j] = v;
            B(j, i) = v;
          }
        }
    return B;
  }
  B.symmetrize();
  return B;
}

}  // namespace

DistanceMatrix approx_l1_matrix(const PointSet& X, double eps, std::uint64_t seed, const BuildOptions& opts,
                                BuildReport* report) {
  const auto t0 = std::chrono::steady_clock::now();
  BuildReport rep;
  DistanceMatrix B = build_l1(X, eps, seed, opts, rep);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (report) *report = std::move(rep);
  return B;
}

DistanceMatrix approx_l2_matrix(const PointSet& X, double eps, std::uint64_t seed, const BuildOptions& opts,
                                BuildReport* report) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
  const auto t0 = std::chrono::steady_clock::now();
  BuildReport rep;
  const L1Embedding emb = l1_embed(X, eps / 3.0, seed, opts.embed_alpha);
  DistanceMatrix B = build_l1(*emb.embedded, eps / 3.0, seed + 1, opts, rep);
  rep.eps = eps;
  rep.embed_dim = emb.k;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (report) *report = std::move(rep);
  return B;
}

}  // namespace dmx
