#include "dmx/builder/compression_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "dmx/error.hpp"

namespace dmx {

GridPoints quantize(const PointSet& X) {
  GridPoints G;
  G.n = X.n();
  G.d = X.d();
  G.anchor.assign(X.row(0).begin(), X.row(0).end());
  G.coords.assign(G.n * G.d, 0);
  double spread = 0.0;  // Delta' = max_i ||x_1 - x_i||_1
  for (std::size_t i = 1; i < G.n; ++i) {
    double s = 0.0;
    for (std::size_t c = 0; c < G.d; ++c) s += std::abs(X(i, c) - G.anchor[c]);
    spread = std::max(spread, s);
  }
  if (G.n == 1) {
    G.degenerate = true;
    G.unit = 1.0;
    G.root_level = 2;
    G.log2_aspect_bound = 1.0;
    return G;
  }
  if (spread == 0.0) throw DomainError("duplicate points: all points coincide");
  int e = 0;
  std::frexp(spread, &e);  // spread in [2^(e-1), 2^e)
  double Delta = std::ldexp(1.0, e);
  if (std::ldexp(1.0, e - 1) == spread) Delta = spread;
  G.unit = std::ldexp(Delta, -GridPoints::kFractionBits);
  const std::int64_t offset = std::int64_t{1} << GridPoints::kFractionBits;
  for (std::size_t i = 0; i < G.n; ++i)
    for (std::size_t c = 0; c < G.d; ++c) {
      const double q = std::nearbyint((X(i, c) - G.anchor[c]) / G.unit);
      G.coords[i * G.d + c] = static_cast<std::uint64_t>(static_cast<std::int64_t>(q) + offset);
    }
  G.root_level = GridPoints::kFractionBits + 2;
  G.log2_aspect_bound = std::max(1.0, std::log2(2.0 * spread / G.unit));
  return G;
}

int compute_lambda(std::size_t d, double log2_aspect, double eps, double delta) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("compression tree needs 0 < eps < 1");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("compression tree needs 0 < delta < 1");
  const double L = std::max(1.0, log2_aspect);
  const double v = 16.0 * std::pow(double(d), 1.5) * L / (eps * delta);
  return std::max(1, static_cast<int>(std::ceil(std::log2(v))));
}

double CompressionTree::rho(int level) const {
  return 8.0 / eps * std::ldexp(1.0, level - lambda) * std::sqrt(double(d));
}

namespace {

class TreeBuilder {
 public:
  explicit TreeBuilder(CompressionTree& T) : T_(T), W_(T.pattern_words) {}

  void run() {
    std::vector<std::uint32_t> all(T_.n);
    std::iota(all.begin(), all.end(), 0u);
    T_.nodes.push_back({});
    T_.nodes[0].level = T_.root_level;
    if (T_.n == 1) T_.isolation[0] = T_.root_level;
    build(0, T_.root_level, all);
  }

 private:
  void key_of(std::uint32_t p, int bit, std::uint64_t* key) const {
    std::fill(key, key + W_, 0);
    const std::uint64_t* g = T_.grid.data() + std::size_t(p) * T_.d;
    for (std::size_t c = 0; c < T_.d; ++c) key[c / 64] |= ((g[c] >> bit) & 1u) << (c % 64);
  }

  bool zero_at(std::uint32_t p, int bit) const {
    const std::uint64_t* g = T_.grid.data() + std::size_t(p) * T_.d;
    for (std::size_t c = 0; c < T_.d; ++c)
      if ((g[c] >> bit) & 1u) return false;
    return true;
  }

  int stop_level(std::uint32_t p) const { return std::max(0, T_.isolation[p] - T_.lambda); }

  void build(std::uint32_t node, int level, std::vector<std::uint32_t>& S) {
    T_.nodes[node].leaf_begin = static_cast<std::uint32_t>(T_.leaf_points.size());
    if (S.size() == 1) {
      const std::uint32_t p = S[0];
      if (level <= stop_level(p)) {
        T_.nodes[node].point = static_cast<std::int32_t>(p);
        T_.leaf_of[p] = node;
        T_.leaf_points.push_back(p);
      } else {
        std::vector<std::uint64_t> key(W_);
        key_of(p, level - 1, key.data());
        child(node, level, S, key.data());
      }
    } else {
      if (level == 0)
        throw DomainError("duplicate points after quantization: " + std::to_string(S[0]) + " and " +
                          std::to_string(S[1]));
      const std::size_t m = S.size();
      std::vector<std::uint64_t> keys(m * W_);
      for (std::size_t k = 0; k < m; ++k) key_of(S[k], level - 1, keys.data() + k * W_);
      std::vector<std::uint32_t> perm(m);
      std::iota(perm.begin(), perm.end(), 0u);
      auto less = [&](std::uint32_t a, std::uint32_t b) {
        return std::lexicographical_compare(keys.begin() + a * W_, keys.begin() + (a + 1) * W_, keys.begin() + b * W_,
                                            keys.begin() + (b + 1) * W_);
      };
      std::sort(perm.begin(), perm.end(), less);
      std::size_t lo = 0;
      while (lo < m) {
        std::size_t hi = lo + 1;
        while (hi < m && !less(perm[lo], perm[hi])) ++hi;
        std::vector<std::uint32_t> group(hi - lo);
        for (std::size_t k = lo; k < hi; ++k) group[k - lo] = S[perm[k]];
        if (group.size() == 1) T_.isolation[group[0]] = level - 1;
        std::vector<std::uint64_t> key(keys.begin() + perm[lo] * W_, keys.begin() + (perm[lo] + 1) * W_);
        child(node, level, group, key.data());
        lo = hi;
      }
    }
    T_.nodes[node].leaf_end = static_cast<std::uint32_t>(T_.leaf_points.size());
    T_.nodes[node].subtree_end = static_cast<std::uint32_t>(T_.nodes.size());
  }

  // Adds the edge below `node` (at `level`) toward the points G whose
  // pattern at bit level-1 is `key`, then recurses.
  void child(std::uint32_t node, int level, std::vector<std::uint32_t>& G, const std::uint64_t* key) {
    CompressionTree::Node c;
    c.parent = static_cast<std::int32_t>(node);
    const bool zero = std::all_of(key, key + W_, [](std::uint64_t w) { return w == 0; });
    if (!zero) {
      c.level = level - 1;
      c.edge = static_cast<std::uint32_t>(T_.short_edges());
      T_.patterns.insert(T_.patterns.end(), key, key + W_);
    } else {
      int cur = level - 1;
      if (G.size() == 1) {
        const int stop = stop_level(G[0]);
        while (cur > stop && zero_at(G[0], cur - 1)) --cur;
      } else {
        while (cur > 0 && std::all_of(G.begin(), G.end(), [&](std::uint32_t p) { return zero_at(p, cur - 1); }))
          --cur;
      }
      c.level = cur;
      c.long_edge = true;
      c.edge = static_cast<std::uint32_t>(level - cur);
    }
    const auto idx = static_cast<std::uint32_t>(T_.nodes.size());
    T_.nodes.push_back(c);
    build(idx, c.level, G);
  }

  CompressionTree& T_;
  std::size_t W_;
};

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

CompressionTree build_compression_tree(const GridPoints& G, const TreeParams& params, std::uint64_t seed) {
  CompressionTree T;
  T.n = G.n;
  T.d = G.d;
  T.pattern_words = (G.d + 63) / 64;
  T.eps = params.eps;
  T.delta = params.delta;
  T.lambda = compute_lambda(G.d, params.log2_aspect.value_or(G.log2_aspect_bound), params.eps, params.delta);
  T.root_level = G.root_level;
  T.unit = G.unit;
  T.anchor = G.anchor;
  if (params.shift) {
    if (params.shift->size() != G.d) throw DimensionError("shift has wrong dimension");
    T.shift = *params.shift;
    for (auto s : T.shift)
      if (!G.degenerate && s >= (std::uint64_t{1} << GridPoints::kFractionBits))
        throw DomainError("shift outside [0, Delta)");
  } else if (G.degenerate) {
    T.shift.assign(G.d, 0);
  } else {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<std::uint64_t> dist(0, (std::uint64_t{1} << GridPoints::kFractionBits) - 1);
    T.shift.resize(G.d);
    for (auto& s : T.shift) s = dist(gen);
  }
  T.grid.resize(G.coords.size());
  for (std::size_t i = 0; i < G.n; ++i)
    for (std::size_t c = 0; c < G.d; ++c) T.grid[i * G.d + c] = G.coords[i * G.d + c] + T.shift[c];
  T.leaf_of.assign(G.n, 0);
  T.isolation.assign(G.n, T.root_level);
  TreeBuilder(T).run();

  // what decompression yields: the bits at and above the leaf level
  T.leaf_coords.resize(G.n * G.d);
  for (std::size_t pos = 0; pos < G.n; ++pos) {
    const std::uint32_t p = T.leaf_points[pos];
    const std::uint64_t keep = ~((std::uint64_t{1} << T.nodes[T.leaf_of[p]].level) - 1);
    for (std::size_t c = 0; c < G.d; ++c) T.leaf_coords[pos * G.d + c] = T.grid[p * G.d + c] & keep;
  }
  return T;
}

CompressionTree build_compression_tree(const PointSet& X, const TreeParams& params, std::uint64_t seed) {
  return build_compression_tree(quantize(X), params, seed);
}

std::vector<std::uint64_t> decompress_grid(const CompressionTree& T, std::size_t i) {
  std::vector<std::uint64_t> g(T.d, 0);
  for (std::int32_t v = static_cast<std::int32_t>(T.leaf_of.at(i)); v > 0; v = T.nodes[v].parent) {
    const auto& node = T.nodes[v];
    if (node.long_edge) continue;
    for (std::size_t c = 0; c < T.d; ++c)
      if (T.pattern_bit(node.edge, c)) g[c] |= std::uint64_t{1} << node.level;
  }
  return g;
}

std::vector<double> grid_to_input(const CompressionTree& T, std::span<const std::uint64_t> g) {
  const std::int64_t offset = T.n == 1 ? 0 : std::int64_t{1} << GridPoints::kFractionBits;
  std::vector<double> x(T.d);
  for (std::size_t c = 0; c < T.d; ++c) {
    const auto q = static_cast<std::int64_t>(g[c] - T.shift[c]) - offset;
    x[c] = T.anchor[c] + double(q) * T.unit;
  }
  return x;
}

std::vector<double> decompress_point(const CompressionTree& T, std::size_t i) {
  return grid_to_input(T, decompress_grid(T, i));
}

bool padded_check(const CompressionTree& T, std::size_t i) {
  if (T.n == 1) return true;
  const int leaf_level = T.nodes[T.leaf_of.at(i)].level;
  const std::uint64_t* g = T.grid.data() + i * T.d;
  for (int level = T.root_level; level >= leaf_level; --level) {
    const double r = T.rho(level);
    const double side = std::ldexp(1.0, level);
    const std::uint64_t mask = (std::uint64_t{1} << level) - 1;
    for (std::size_t c = 0; c < T.d; ++c) {
      // nearest grid point outside the cell: below + 1 down, side - below up
      const double below = double(g[c] & mask);
      if (below + 1.0 <= r || side - below <= r) return false;
    }
  }
  return true;
}

Forest build_forest(const PointSet& X, double eps, std::uint64_t seed, const ForestParams& params) {
  GridPoints G = quantize(X);
  const std::size_t n = X.n();
  const std::size_t cap =
      params.max_trees.value_or(std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(8.0 * std::log2(double(n))))));
  TreeParams tp;
  tp.eps = eps;
  tp.delta = params.delta;
  tp.log2_aspect = params.log2_aspect;
  Forest F;
  constexpr std::uint32_t kUnassigned = 0xffffffffu;
  F.assignment.assign(n, kUnassigned);
  std::size_t remaining = n;
  for (std::size_t t = 0; remaining > 0; ++t) {
    if (t >= cap)
      throw Error("forest cap of " + std::to_string(cap) + " trees reached with " + std::to_string(remaining) +
                  " points never padded");
    CompressionTree T = build_compression_tree(G, tp, mix(seed + t));
    std::size_t padded = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!padded_check(T, i)) continue;
      ++padded;
      if (F.assignment[i] == kUnassigned) {
        F.assignment[i] = static_cast<std::uint32_t>(t);
        --remaining;
      }
    }
    F.padding_rate.push_back(double(padded) / double(n));
    F.lambda = T.lambda;
    F.trees.push_back(std::move(T));
  }
  return F;
}

}  // namespace dmx
