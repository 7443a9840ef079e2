#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dmx/builder/compression_tree.hpp"

namespace dmx {

// Word layout for the packed DFS. Each coordinate gets a P-bit slot; f slots
// share a 64-bit word and a short edge becomes w = ceil(d / f) words. The bit
// of coordinate c sits at word c / f, position (c % f) * P + P - 1, so that
// shifting a word right by q drops it to the slot bit for depth q.
struct PackLayout {
  int P = 0;             // tracked depth in levels
  int key_bits = 1;      // ceil(log2 n) / 2
  std::size_t f = 0;     // slots per word
  std::size_t w = 0;     // words per short edge
  bool packable = false; // f >= 1
  bool table_backed = false;

  int word_bits() const { return static_cast<int>(f) * P; }
  std::uint64_t slot_mask() const { return P >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << P) - 1; }
};

// Table entries are capped at 2^26.
inline constexpr int kMaxTableBits = 26;

PackLayout pack_layout(std::size_t d, std::size_t n, int P, std::optional<int> key_bits = {});

struct PackedTree {
  PackLayout layout;
  std::size_t d = 0;
  std::vector<std::uint64_t> words;  // w per short edge

  std::span<const std::uint64_t> edge(std::size_t e) const { return {words.data() + e * layout.w, layout.w}; }
  std::vector<bool> unpack(std::size_t e) const;
};

PackedTree pack_tree(const CompressionTree& T, const PackLayout& layout);

// A[(x << K) | y] = sum over the f slots of |x_slot - y_slot|, K = f * P.
struct LookupTable {
  int key_bits = 0;  // K
  std::size_t f = 0;
  int P = 0;
  std::vector<std::uint32_t> entries;

  std::uint32_t operator()(std::uint64_t x, std::uint64_t y) const { return entries[(x << key_bits) | y]; }
};

LookupTable build_lookup_table(const PackLayout& layout);

// Slot-by-slot |x - y| sum over one packed word.
std::uint64_t block_distance(std::uint64_t x, std::uint64_t y, std::size_t f, int P);

}  // namespace dmx
