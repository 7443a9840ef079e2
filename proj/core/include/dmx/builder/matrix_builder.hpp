#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dmx/builder/compression_tree.hpp"
#include "dmx/builder/packed_tree.hpp"
#include "dmx/distance_matrix.hpp"
#include "dmx/point_set.hpp"

namespace dmx {

enum class RowPath { automatic, reference, packed };

struct BuildOptions {
  double delta = 0.25;
  std::optional<double> log2_aspect;
  std::optional<int> tracked_depth;  // default 2 Lambda
  std::optional<int> key_bits;       // default ceil(log2 n) / 2
  std::optional<std::size_t> max_trees;
  RowPath path = RowPath::automatic;  // automatic: packed only when table backed
  double embed_alpha = 12.0;
};

struct BuildReport {
  double eps = 0.0;
  double delta = 0.0;
  int lambda = 0;
  int tracked_depth = 0;
  std::size_t words = 0;  // w
  std::size_t slots = 0;  // f
  int key_bits = 0;
  bool table_backed = false;
  std::size_t trees = 0;
  std::vector<double> padding_rate;
  std::string path;
  std::size_t embed_dim = 0;  // l2 only
  double seconds = 0.0;
};

DistanceMatrix approx_l1_matrix(const PointSet& X, double eps, std::uint64_t seed, const BuildOptions& opts = {},
                                BuildReport* report = nullptr);

// Embeds into l1 with eps / 3 and builds the l1 matrix with eps / 3.
DistanceMatrix approx_l2_matrix(const PointSet& X, double eps, std::uint64_t seed, const BuildOptions& opts = {},
                                BuildReport* report = nullptr);

}  // namespace dmx
