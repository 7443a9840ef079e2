#include "dmx/exact/sorted_index.hpp"

#include <algorithm>
#include <numeric>

#include "dmx/error.hpp"

namespace dmx {

SortedIndex build_sorted_index(const PointSet& X) {
  if (X.n() > std::size_t{0xffffffffu}) throw DimensionError("too many points for a 32-bit index");
  SortedIndex idx;
  idx.n = X.n();
  idx.d = X.d();
  const std::size_t n = idx.n;
  idx.order.resize(n * idx.d);
  idx.rank.resize(n * idx.d);
  idx.sorted.resize(n * idx.d);
  std::vector<double> col(n);
  for (std::size_t i = 0; i < idx.d; ++i) {
    for (std::size_t k = 0; k < n; ++k) col[k] = X(k, i);
    auto ord = idx.order.begin() + static_cast<std::ptrdiff_t>(i * n);
    std::iota(ord, ord + static_cast<std::ptrdiff_t>(n), 0u);
    std::stable_sort(ord, ord + static_cast<std::ptrdiff_t>(n),
                     [&](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
    for (std::size_t r = 0; r < n; ++r) {
      std::uint32_t k = idx.order[i * n + r];
      idx.rank[i * n + k] = static_cast<std::uint32_t>(r);
      idx.sorted[i * n + r] = col[k];
    }
  }
  return idx;
}

}  // namespace dmx
