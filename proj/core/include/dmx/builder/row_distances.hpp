#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dmx/builder/compression_tree.hpp"
#include "dmx/builder/packed_tree.hpp"

namespace dmx {

// Default number of levels tracked below each subtree root: 2 Lambda.
int default_tracked_depth(const CompressionTree& T);

// Approximate l1 distances from point i to every point, written to out[j]
// (indexed by point). For each ancestor v of i's leaf, the points under v
// but outside i's branch are compared on the P bits just below level(v).
void reference_row(const CompressionTree& T, std::size_t i, int P, std::span<double> out);

// reference_row for many rows at once, sweeping the leaves in cache-sized
// tiles. Row r of the result goes to out[r * T.n ...], indexed by point.
// With `before` set, leaf positions left of a row's own leaf are only
// computed when listed there (sorted); the other entries are zero.
void reference_rows(const CompressionTree& T, std::span<const std::uint32_t> rows, int P, std::span<double> out,
                    const std::vector<std::uint32_t>* before = nullptr);
// Same, writing row r through out[r] (each of length T.n).
void reference_rows(const CompressionTree& T, std::span<const std::uint32_t> rows, int P,
                    std::span<double* const> out, const std::vector<std::uint32_t>* before = nullptr);

// Same values from the packed words; table may be null for slot arithmetic.
void packed_row(const CompressionTree& T, const PackedTree& PT, const LookupTable* table, std::size_t i,
                std::span<double> out);

}  // namespace dmx
