// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "tilemul/tile_format.hpp"

namespace tilemul {

// Reference to one multiplicand pair: indices into A.tiles and B.tiles.
struct TilePair {
  std::uint32_t a_tile = 0;
  std::uint32_t b_tile = 0;

  friend bool operator==(const TilePair&, const TilePair&) = default;
};

// Sorted multiplicand list, segmented by output tile. Pairs of segment s
// occupy [seg_offsets[s], seg_offsets[s+1]); all share out_coords[s] and
// are ordered by ascending inner tile index k.
struct TaskList {
  std::vector<TilePair> pairs;
  std::vector<std::uint64_t> seg_offsets;  // size = num_segments() + 1
  struct OutCoord {
    std::uint32_t tile_row = 0;
    std::uint32_t tile_col = 0;

    friend bool operator==(const OutCoord&, const OutCoord&) = default;
  };
  std::vector<OutCoord> out_coords;  // one per segment

  std::uint64_t num_segments() const { return out_coords.size(); }
};

// Boolean 8x8 matrix product on occupancy masks: output bit (i, j) is set
// iff some k has a(i,k) and b(k,j).
std::uint64_t boolean_tile_mm(std::uint64_t a, std::uint64_t b);

// Equivalent to boolean_tile_mm(a, b) != 0 without forming the product:
// some column k of a and row k of b are both non-empty.
bool tile_product_nonzero(std::uint64_t a, std::uint64_t b);

// All (a, b) tile pairs with tileCol(a) == tileRow(b), in A-tile order.
// Throws DimensionError when A.cols != B.rows.
std::vector<TilePair> enumerate_pairs(const TiledMatrix& A,
                                      const TiledMatrix& B);

// Keeps pairs whose bitmap product is nonzero, preserving order.
std::vector<TilePair> filter_zero_products(std::vector<TilePair> pairs,
                                           const TiledMatrix& A,
                                           const TiledMatrix& B);

// Sorts pairs by output coordinate (tileRow(a), tileCol(b)), ties by
// ascending inner tile index, and computes segment offsets.
TaskList sort_and_segment(std::vector<TilePair> pairs, const TiledMatrix& A,
                          const TiledMatrix& B);

}  // namespace tilemul
