#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dmx/point_set.hpp"

namespace dmx::cli {

// Spherical unit-variance clusters around centers drawn from N(0, spread^2 I).
PointSet gaussian_mixture(std::size_t n, std::size_t d, std::uint64_t seed, std::size_t components = 3,
                          double spread = 5.0);
// Integer coordinates uniform in [0, M].
PointSet uniform_integer(std::size_t n, std::size_t d, std::int64_t M, std::uint64_t seed);
// Rows drawn from Dirichlet(1, ..., 1): normalized -log U.
PointSet simplex_points(std::size_t n, std::size_t d, std::uint64_t seed);

struct DatasetSpec {
  std::string kind = "gaussian-mixture";  // gaussian-mixture | uniform-integer | simplex
  std::size_t n = 100;
  std::size_t d = 8;
  std::uint64_t seed = 1;
  std::int64_t M = 1;
  std::size_t components = 3;
};

const std::vector<std::string>& dataset_kinds();
PointSet generate(const DatasetSpec& spec);

// Seeded standard Gaussian vector.
std::vector<double> gaussian_vector(std::size_t n, std::uint64_t seed);

}  // namespace dmx::cli
