#include "dmx/builder/row_distances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dmx/error.hpp"

namespace dmx {

int default_tracked_depth(const CompressionTree& T) { return 2 * T.lambda; }

namespace {

void check_row(const CompressionTree& T, std::size_t i, std::span<double> out) {
  if (i >= T.n) throw DimensionError("row index out of range");
  if (out.size() != T.n) throw DimensionError("row buffer has wrong length");
}

}  // namespace

namespace {

// Leaf positions [lo, hi) compared after dropping `up` low bits.
struct Span {
  std::uint32_t lo, hi;
  int up;
  bool left;  // before the row's own leaf
};

// The positions of every other point split into one span per side of each
// ancestor, in increasing order.
std::vector<Span> row_spans(const CompressionTree& T, std::size_t i, int P) {
  std::vector<Span> left, right;
  std::uint32_t child = T.leaf_of[i];
  for (std::int32_t v = T.nodes[child].parent; v >= 0; child = static_cast<std::uint32_t>(v), v = T.nodes[v].parent) {
    const auto& node = T.nodes[v];
    const auto& cn = T.nodes[child];
    const int up = std::max(0, node.level - P);
    if (node.leaf_begin < cn.leaf_begin) left.push_back({node.leaf_begin, cn.leaf_begin, up, true});
    if (cn.leaf_end < node.leaf_end) right.push_back({cn.leaf_end, node.leaf_end, up, false});
  }
  // ancestors run bottom-up: left spans come out in decreasing order
  std::vector<Span> spans(left.rbegin(), left.rend());
  spans.insert(spans.end(), right.begin(), right.end());
  return spans;
}

// Leaf coordinates of positions [t0, t0 + len), coordinate-major.
struct Tile {
  std::size_t t0 = 0, len = 0;
  std::vector<std::uint64_t> yT;

  void load(const CompressionTree& T, std::size_t begin, std::size_t end) {
    t0 = begin;
    len = end - begin;
    yT.resize(T.d * len);
    for (std::size_t pos = begin; pos < end; ++pos) {
      const std::uint64_t* y = T.leaf_coords.data() + pos * T.d;
      for (std::size_t c = 0; c < T.d; ++c) yT[c * len + (pos - begin)] = y[c];
    }
  }
};

void compare_span(const CompressionTree& T, const Tile& tile, const std::uint64_t* s, std::uint32_t lo,
                  std::uint32_t hi, int up, std::vector<std::int64_t>& acc, double* out) {
  const std::size_t d = T.d, m = hi - lo, off = lo - tile.t0;
  acc.assign(m, 0);
  std::int64_t* __restrict A = acc.data();
  std::size_t c = 0;
  for (; c + 4 <= d; c += 4) {
    const std::uint64_t* __restrict y0 = tile.yT.data() + c * tile.len + off;
    const std::uint64_t* __restrict y1 = y0 + tile.len;
    const std::uint64_t* __restrict y2 = y1 + tile.len;
    const std::uint64_t* __restrict y3 = y2 + tile.len;
    const auto s0 = static_cast<std::int64_t>(s[c] >> up), s1 = static_cast<std::int64_t>(s[c + 1] >> up);
    const auto s2 = static_cast<std::int64_t>(s[c + 2] >> up), s3 = static_cast<std::int64_t>(s[c + 3] >> up);
    for (std::size_t k = 0; k < m; ++k) {
      const std::int64_t a0 = static_cast<std::int64_t>(y0[k] >> up) - s0;
      const std::int64_t a1 = static_cast<std::int64_t>(y1[k] >> up) - s1;
      const std::int64_t a2 = static_cast<std::int64_t>(y2[k] >> up) - s2;
      const std::int64_t a3 = static_cast<std::int64_t>(y3[k] >> up) - s3;
      A[k] += (a0 < 0 ? -a0 : a0) + (a1 < 0 ? -a1 : a1) + (a2 < 0 ? -a2 : a2) + (a3 < 0 ? -a3 : a3);
    }
  }
  for (; c < d; ++c) {
    const std::uint64_t* __restrict y0 = tile.yT.data() + c * tile.len + off;
    const auto s0 = static_cast<std::int64_t>(s[c] >> up);
    for (std::size_t k = 0; k < m; ++k) {
      const std::int64_t a0 = static_cast<std::int64_t>(y0[k] >> up) - s0;
      A[k] += a0 < 0 ? -a0 : a0;
    }
  }
  const double scale = std::ldexp(T.unit, up);
  for (std::size_t k = 0; k < m; ++k) out[lo + k] = double(A[k]) * scale;
}

double compare_pair(const CompressionTree& T, const std::uint64_t* s, std::uint32_t pos, int up) {
  const std::uint64_t* y = T.leaf_coords.data() + std::size_t(pos) * T.d;
  std::int64_t acc = 0;
  for (std::size_t c = 0; c < T.d; ++c) {
    const std::int64_t a = static_cast<std::int64_t>(y[c] >> up) - static_cast<std::int64_t>(s[c] >> up);
    acc += a < 0 ? -a : a;
  }
  return double(acc) * std::ldexp(T.unit, up);
}

const std::uint64_t* query_coords(const CompressionTree& T, std::size_t i) {
  return T.leaf_coords.data() + std::size_t(T.nodes[T.leaf_of[i]].leaf_begin) * T.d;
}

}  // namespace

void reference_row(const CompressionTree& T, std::size_t i, int P, std::span<double> out) {
  const std::uint32_t r = static_cast<std::uint32_t>(i);
  reference_rows(T, {&r, 1}, P, out);
}

void reference_rows(const CompressionTree& T, std::span<const std::uint32_t> rows, int P, std::span<double> out,
                    const std::vector<std::uint32_t>* before) {
  if (out.size() != rows.size() * T.n) throw DimensionError("row buffer has wrong length");
  std::vector<double*> ptrs(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) ptrs[r] = out.data() + r * T.n;
  reference_rows(T, rows, P, std::span<double* const>(ptrs), before);
}

void reference_rows(const CompressionTree& T, std::span<const std::uint32_t> rows, int P,
                    std::span<double* const> out, const std::vector<std::uint32_t>* before) {
  if (P < 1) throw DomainError("tracked depth must be positive");
  const std::size_t n = T.n, d = T.d;
  if (out.size() != rows.size()) throw DimensionError("one output row per requested row");
  for (auto i : rows)
    if (i >= n) throw DimensionError("row index out of range");

  std::vector<std::vector<Span>> spans(rows.size());
  std::vector<std::size_t> cursor(rows.size(), 0);
  for (std::size_t r = 0; r < rows.size(); ++r) spans[r] = row_spans(T, rows[r], P);
  std::vector<std::int64_t> acc;
  Tile tile;
  if (before)
    for (double* row : out) std::fill(row, row + n, 0.0);
  // tiles only pay off when many rows share them
  const bool tiled = rows.size() >= 16;
  if (!tiled)
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::uint64_t* s = query_coords(T, rows[r]);
      for (const auto& sp : spans[r])
        if (!(before && sp.left))
          for (std::uint32_t pos = sp.lo; pos < sp.hi; ++pos) out[r][pos] = compare_pair(T, s, pos, sp.up);
    }

  // about 512 KiB of leaf coordinates per tile
  const std::size_t width = std::max<std::size_t>(64, (std::size_t{1} << 16) / std::max<std::size_t>(d, 1));
  for (std::size_t t0 = 0; tiled && t0 < n; t0 += width) {
    const auto t1 = static_cast<std::uint32_t>(std::min(n, t0 + width));
    tile.load(T, t0, t1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto& sp = spans[r];
      const std::uint64_t* s = query_coords(T, rows[r]);
      std::size_t& k = cursor[r];
      while (k < sp.size() && sp[k].hi <= t0) ++k;
      for (std::size_t m = k; m < sp.size() && sp[m].lo < t1; ++m) {
        if (before && sp[m].left) continue;
        const auto lo = std::max(sp[m].lo, static_cast<std::uint32_t>(t0));
        const auto hi = std::min(sp[m].hi, t1);
        compare_span(T, tile, s, lo, hi, sp[m].up, acc, out[r]);
      }
    }
  }
  if (before)
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::uint64_t* s = query_coords(T, rows[r]);
      for (const auto& sp : spans[r]) {
        if (!sp.left) break;
        for (auto it = std::lower_bound(before->begin(), before->end(), sp.lo); it != before->end() && *it < sp.hi; ++it)
          out[r][*it] = compare_pair(T, s, *it, sp.up);
      }
    }
  // leaf order -> point order
  std::vector<double> tmp(n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double* row = out[r];
    row[T.nodes[T.leaf_of[rows[r]]].leaf_begin] = 0.0;
    std::copy(row, row + n, tmp.begin());
    for (std::size_t pos = 0; pos < n; ++pos) row[T.leaf_points[pos]] = tmp[pos];
  }
}

namespace {

class PackedWalker {
 public:
  PackedWalker(const CompressionTree& T, const PackedTree& PT, const LookupTable* table, std::span<double> out)
      : T_(T), PT_(PT), L_(PT.layout), table_(table), out_(out), s_(L_.w), stack_(L_.w * (T.root_level + 2)) {}

  void row(std::size_t i) {
    const std::uint32_t leaf = T_.leaf_of[i];
    const std::uint64_t* s = T_.leaf_coords.data() + std::size_t(T_.nodes[leaf].leaf_begin) * T_.d;
    out_[i] = 0.0;
    std::uint32_t child = leaf;
    for (std::int32_t v = T_.nodes[leaf].parent; v >= 0; child = static_cast<std::uint32_t>(v), v = T_.nodes[v].parent) {
      const auto& node = T_.nodes[v];
      top_ = node.level;
      const int sh = top_ - L_.P;
      scale_ = std::ldexp(T_.unit, sh);
      std::fill(s_.begin(), s_.end(), 0);
      for (std::size_t c = 0; c < T_.d; ++c) {
        const std::uint64_t slot = (sh >= 0 ? s[c] >> sh : s[c] << -sh) & L_.slot_mask();
        s_[c / L_.f] |= slot << ((c % L_.f) * L_.P);
      }
      std::fill(stack_.begin(), stack_.begin() + static_cast<std::ptrdiff_t>(L_.w), 0);
      for (std::uint32_t u = static_cast<std::uint32_t>(v) + 1; u < node.subtree_end; u = T_.nodes[u].subtree_end)
        if (u != child) descend(u, 0);
    }
  }

 private:
  // Enters node u; frame `depth` of the stack holds t before u's edge.
  void descend(std::uint32_t u, std::size_t depth) {
    const auto& node = T_.nodes[u];
    const std::uint64_t* t_in = stack_.data() + depth * L_.w;
    std::uint64_t* t = stack_.data() + (depth + 1) * L_.w;
    std::copy(t_in, t_in + L_.w, t);
    const int q = top_ - node.level - 1;  // counter: levels consumed before u's bit
    if (!node.long_edge && q < L_.P) {
      auto e = PT_.edge(node.edge);
      for (std::size_t k = 0; k < L_.w; ++k) t[k] += e[k] >> q;
    }
    if (node.point >= 0 || top_ - node.level >= L_.P) {
      report(node.leaf_begin, node.leaf_end, t);
      return;
    }
    for (std::uint32_t c = u + 1; c < node.subtree_end; c = T_.nodes[c].subtree_end) descend(c, depth + 1);
  }

  void report(std::uint32_t lo, std::uint32_t hi, const std::uint64_t* t) {
    std::uint64_t acc = 0;
    if (table_) {
      for (std::size_t k = 0; k < L_.w; ++k) acc += (*table_)(t[k], s_[k]);
    } else {
      for (std::size_t k = 0; k < L_.w; ++k) acc += block_distance(t[k], s_[k], L_.f, L_.P);
    }
    const double value = double(acc) * scale_;
    for (std::uint32_t pos = lo; pos < hi; ++pos) out_[T_.leaf_points[pos]] = value;
  }

  const CompressionTree& T_;
  const PackedTree& PT_;
  const PackLayout& L_;
  const LookupTable* table_;
  std::span<double> out_;
  std::vector<std::uint64_t> s_;
  std::vector<std::uint64_t> stack_;
  int top_ = 0;
  double scale_ = 1.0;
};

}  // namespace

void packed_row(const CompressionTree& T, const PackedTree& PT, const LookupTable* table, std::size_t i,
                std::span<double> out) {
  check_row(T, i, out);
  if (PT.d != T.d || PT.layout.w * PT.layout.f < T.d) throw DimensionError("packed tree does not match the tree");
  if (table && (table->P != PT.layout.P || table->f != PT.layout.f))
    throw DimensionError("lookup table does not match the layout");
  PackedWalker(T, PT, table, out).row(i);
}

}  // namespace dmx
