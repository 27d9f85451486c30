// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tilemul/coo.hpp"

namespace tilemul {

inline constexpr int kTileDim = 8;
inline constexpr int kTileSlots = kTileDim * kTileDim;

// Precision kind of the stored element array. Elements are held as fp32
// in memory either way; Fp16Stored additionally guarantees every element
// is exactly binary16-representable (and serializes as u16 bit patterns).
enum class ElementKind : std::uint8_t { Fp16Stored = 0, Fp32Stored = 1 };

// One non-empty 8x8 tile. Bit b of the bitmap (b = 8*r + c, bit 0 = least
// significant = slot (0,0), row-major) is set iff slot (r, c) is nonzero.
// Elements of the tile occupy [elem_index, elem_index + popcount(bitmap))
// of the shared element array, in ascending bit order.
struct TileEntry {
  std::uint32_t tile_row = 0;
  std::uint32_t tile_col = 0;
  std::uint64_t elem_index = 0;
  std::uint64_t bitmap = 0;

  friend bool operator==(const TileEntry&, const TileEntry&) = default;
};

// Dense 8x8 scratch tile for the kernels, row-major.
enum class TileKind : std::uint8_t { Boolean, Half, Accumulator };

struct Tile8 {
  TileKind kind = TileKind::Accumulator;
  std::array<float, kTileSlots> data{};
};

// COO-of-tiles sparse matrix: tiles sorted by (tile_row, tile_col), each
// with at least one element, elements tile-contiguous in bit order.
struct TiledMatrix {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  ElementKind kind = ElementKind::Fp16Stored;
  std::vector<TileEntry> tiles;
  std::vector<float> elements;

  std::uint64_t tile_rows() const { return (rows + kTileDim - 1) / kTileDim; }
  std::uint64_t tile_cols() const { return (cols + kTileDim - 1) / kTileDim; }
  std::uint64_t nnz() const { return elements.size(); }

  friend bool operator==(const TiledMatrix&, const TiledMatrix&) = default;
};

// Mask with bit 8*r+c set iff t[r][c] != 0.
std::uint64_t bitmap_of_dense_tile(const Tile8& t);

// Offset of slot bit b within its tile's element run.
inline std::uint32_t element_offset_in_tile(std::uint64_t bitmap, int bit) {
  const std::uint64_t below = (bit == 0) ? 0 : (bitmap & ((1ULL << bit) - 1));
  return static_cast<std::uint32_t>(__builtin_popcountll(below));
}

// Groups entries into non-empty 8x8 tiles. Zero-valued entries (including
// values that round to zero under the target kind) are discarded. With
// kind == Fp16Stored every value passes through round_to_half, which
// throws OverflowError outside the binary16 range. Non-finite entries
// throw OverflowError unless drop_nonfinite is set.
TiledMatrix from_element_coo(const ElementCoo& m, ElementKind kind,
                             bool drop_nonfinite = false);

// Inverse conversion; output sorted by (row, col).
ElementCoo to_element_coo(const TiledMatrix& m);

// Throws InvariantError when any TiledMatrix invariant is violated.
void validate_tiled(const TiledMatrix& m);

}  // namespace tilemul
