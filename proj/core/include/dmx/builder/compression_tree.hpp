#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dmx/point_set.hpp"

namespace dmx {

// Points on a fixed-point grid: g = round((x - x_1) / unit) + 2^52 per
// coordinate, unit = Delta / 2^52, Delta the power of two at or above
// max_i ||x_1 - x_i||_1. A tree adds its random shift on top.
struct GridPoints {
  static constexpr int kFractionBits = 52;

  std::size_t n = 0;
  std::size_t d = 0;
  double unit = 1.0;
  std::vector<double> anchor;        // x_1
  std::vector<std::uint64_t> coords; // n x d, unshifted
  int root_level = 54;               // log2 of the root cell side (4 Delta in grid units)
  double log2_aspect_bound = 1.0;    // log2(2 Delta' / unit), an upper bound on log2 Phi
  bool degenerate = false;           // n == 1: coordinates all zero, unit grid
};

GridPoints quantize(const PointSet& X);

struct TreeParams {
  double eps = 0.25;
  double delta = 0.25;
  std::optional<double> log2_aspect;               // log2 Phi when known
  std::optional<std::vector<std::uint64_t>> shift; // fixed shift instead of a random one
};

// Lambda = ceil(log2(16 d^1.5 log2(Phi) / (eps delta))), at least 1.
int compute_lambda(std::size_t d, double log2_aspect, double eps, double delta);

class CompressionTree {
 public:
  struct Node {
    std::int32_t parent = -1;
    std::int32_t level = 0;
    std::uint32_t subtree_end = 0;  // preorder index past the last descendant
    std::uint32_t leaf_begin = 0;   // range in leaf order
    std::uint32_t leaf_end = 0;
    std::int32_t point = -1;        // leaves only
    std::uint32_t edge = 0;         // short edge: pattern index; long edge: run length
    bool long_edge = false;         // edge from the parent
  };

  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t pattern_words = 1;
  int lambda = 1;
  int root_level = 0;
  double unit = 1.0;
  double eps = 0.25;
  double delta = 0.25;
  std::vector<double> anchor;
  std::vector<std::uint64_t> shift;
  std::vector<std::uint64_t> grid;         // n x d shifted grid coordinates
  std::vector<Node> nodes;                 // preorder, nodes[0] is the root
  std::vector<std::uint64_t> patterns;     // pattern_words per short edge
  std::vector<std::uint32_t> leaf_points;  // leaf order -> point
  std::vector<std::uint32_t> leaf_of;      // point -> node index
  std::vector<std::int32_t> isolation;     // point -> level where its cell first holds it alone
  std::vector<std::uint64_t> leaf_coords;  // leaf order x d, decompressed grid coordinates

  bool pattern_bit(std::uint32_t edge, std::size_t c) const {
    return (patterns[edge * pattern_words + c / 64] >> (c % 64)) & 1u;
  }
  std::size_t short_edges() const { return patterns.size() / pattern_words; }
  double rho(int level) const;  // padding radius in grid units
};

CompressionTree build_compression_tree(const GridPoints& G, const TreeParams& params, std::uint64_t seed);
CompressionTree build_compression_tree(const PointSet& X, const TreeParams& params, std::uint64_t seed);

// Grid coordinates assembled from the bits on the root-to-leaf path.
std::vector<std::uint64_t> decompress_grid(const CompressionTree& T, std::size_t i);
// Same, mapped back to input coordinates.
std::vector<double> decompress_point(const CompressionTree& T, std::size_t i);
std::vector<double> grid_to_input(const CompressionTree& T, std::span<const std::uint64_t> g);

bool padded_check(const CompressionTree& T, std::size_t i);

struct Forest {
  std::vector<CompressionTree> trees;
  std::vector<std::uint32_t> assignment;  // point -> tree where it is padded
  std::vector<double> padding_rate;       // fraction of padded points per tree
  int lambda = 1;
};

struct ForestParams {
  double delta = 0.25;
  std::optional<double> log2_aspect;
  std::optional<std::size_t> max_trees;  // default ceil(8 log2 n)
};

Forest build_forest(const PointSet& X, double eps, std::uint64_t seed, const ForestParams& params = {});

}  // namespace dmx
