#include "dmx/builder/packed_tree.hpp"

#include <algorithm>
#include <cmath>

#include "dmx/error.hpp"

namespace dmx {

PackLayout pack_layout(std::size_t d, std::size_t n, int P, std::optional<int> key_bits) {
  if (P < 1) throw DomainError("tracked depth must be positive");
  PackLayout L;
  L.P = P;
  const int log_n = n > 1 ? static_cast<int>(std::ceil(std::log2(double(n)))) : 1;
  L.key_bits = key_bits.value_or(std::max(1, log_n / 2));
  if (L.key_bits < 1) throw DomainError("key width must be positive");
  if (P <= L.key_bits) {
    L.f = std::min<std::size_t>(d, static_cast<std::size_t>(L.key_bits / P));
    L.table_backed = 2 * static_cast<int>(L.f) * P <= kMaxTableBits;
  } else {
    L.f = std::min<std::size_t>(d, P < 64 ? static_cast<std::size_t>(64 / P) : 0);
  }
  L.packable = L.f >= 1;
  if (!L.packable) L.table_backed = false;
  L.w = L.packable ? (d + L.f - 1) / L.f : 0;
  return L;
}

std::vector<bool> PackedTree::unpack(std::size_t e) const {
  std::vector<bool> bits(d);
  auto ws = edge(e);
  const int P = layout.P;
  for (std::size_t c = 0; c < d; ++c)
    bits[c] = (ws[c / layout.f] >> ((c % layout.f) * P + P - 1)) & 1u;
  return bits;
}

PackedTree pack_tree(const CompressionTree& T, const PackLayout& layout) {
  if (!layout.packable) throw DomainError("layout cannot hold a single slot per word");
  PackedTree PT;
  PT.layout = layout;
  PT.d = T.d;
  const std::size_t edges = T.short_edges();
  PT.words.assign(edges * layout.w, 0);
  const int P = layout.P;
  for (std::size_t e = 0; e < edges; ++e) {
    std::uint64_t* ws = PT.words.data() + e * layout.w;
    for (std::size_t c = 0; c < T.d; ++c)
      if (T.pattern_bit(static_cast<std::uint32_t>(e), c))
        ws[c / layout.f] |= std::uint64_t{1} << ((c % layout.f) * P + P - 1);
  }
  return PT;
}

std::uint64_t block_distance(std::uint64_t x, std::uint64_t y, std::size_t f, int P) {
  const std::uint64_t mask = P >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << P) - 1;
  std::uint64_t s = 0;
  for (std::size_t k = 0; k < f; ++k) {
    const std::uint64_t a = (x >> (k * P)) & mask;
    const std::uint64_t b = (y >> (k * P)) & mask;
    s += a > b ? a - b : b - a;
  }
  return s;
}

LookupTable build_lookup_table(const PackLayout& layout) {
  if (!layout.table_backed) throw BudgetError("lookup table would exceed 2^26 entries");
  LookupTable A;
  A.key_bits = layout.word_bits();
  A.f = layout.f;
  A.P = layout.P;
  const std::uint64_t side = std::uint64_t{1} << A.key_bits;
  A.entries.resize(side * side);
  for (std::uint64_t x = 0; x < side; ++x)
    for (std::uint64_t y = 0; y < side; ++y)
      A.entries[(x << A.key_bits) | y] = static_cast<std::uint32_t>(block_distance(x, y, A.f, A.P));
  return A;
}

}  // namespace dmx
