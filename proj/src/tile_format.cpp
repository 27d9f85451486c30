// SPDX-License-Identifier: Apache-2.0
#include "tilemul/tile_format.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "tilemul/errors.hpp"
#include "tilemul/half.hpp"

namespace tilemul {

void normalize_coo(ElementCoo& m) {
  std::sort(m.entries.begin(), m.entries.end(),
            [](const ElementCoo::Entry& a, const ElementCoo::Entry& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  std::size_t out = 0;
  for (std::size_t i = 0; i < m.entries.size();) {
    ElementCoo::Entry e = m.entries[i];
    std::size_t j = i + 1;
    while (j < m.entries.size() && m.entries[j].row == e.row &&
           m.entries[j].col == e.col) {
      e.value += m.entries[j].value;
      ++j;
    }
    m.entries[out++] = e;
    i = j;
  }
  m.entries.resize(out);
}

void validate_coo(const ElementCoo& m) {
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const auto& e = m.entries[i];
    if (e.row >= m.rows || e.col >= m.cols) {
      throw InvariantError("COO entry (" + std::to_string(e.row) + ", " +
                           std::to_string(e.col) + ") outside " +
                           std::to_string(m.rows) + "x" +
                           std::to_string(m.cols));
    }
    if (i > 0) {
      const auto& p = m.entries[i - 1];
      if (p.row > e.row || (p.row == e.row && p.col >= e.col)) {
        throw InvariantError("COO entries unsorted or duplicated at index " +
                             std::to_string(i));
      }
    }
  }
}

std::uint64_t bitmap_of_dense_tile(const Tile8& t) {
  std::uint64_t mask = 0;
  for (int b = 0; b < kTileSlots; ++b) {
    if (t.data[b] != 0.0f) mask |= 1ULL << b;
  }
  return mask;
}

TiledMatrix from_element_coo(const ElementCoo& m, ElementKind kind,
                             bool drop_nonfinite) {
  validate_coo(m);

  TiledMatrix out;
  out.rows = m.rows;
  out.cols = m.cols;
  out.kind = kind;

  // Stored value of each surviving entry, keyed by (tileRow, tileCol, bit).
  struct Slot {
    std::uint64_t tile_row;
    std::uint64_t tile_col;
    std::uint32_t bit;
    float value;
  };
  std::vector<Slot> slots;
  slots.reserve(m.entries.size());

  for (const auto& e : m.entries) {
    double v = e.value;
    if (!std::isfinite(v)) {
      if (drop_nonfinite) continue;
      throw OverflowError("non-finite value at (" + std::to_string(e.row) +
                          ", " + std::to_string(e.col) + ")");
    }
    if (v == 0.0) continue;
    float stored;
    if (kind == ElementKind::Fp16Stored) {
      stored = static_cast<float>(round_to_half(v));
    } else {
      stored = static_cast<float>(v);
      if (!std::isfinite(stored)) {
        throw OverflowError("value at (" + std::to_string(e.row) + ", " +
                            std::to_string(e.col) + ") overflows fp32");
      }
    }
    if (stored == 0.0f) continue;  // rounded/underflowed to zero
    slots.push_back({e.row / kTileDim, e.col / kTileDim,
                     static_cast<std::uint32_t>((e.row % kTileDim) * kTileDim +
                                                e.col % kTileDim),
                     stored});
  }

  // Entry order is (row, col); tile assembly needs (tileRow, tileCol, bit).
  std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
    if (a.tile_row != b.tile_row) return a.tile_row < b.tile_row;
    if (a.tile_col != b.tile_col) return a.tile_col < b.tile_col;
    return a.bit < b.bit;
  });

  out.elements.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size();) {
    const std::uint64_t tr = slots[i].tile_row;
    const std::uint64_t tc = slots[i].tile_col;
    TileEntry tile;
    tile.tile_row = static_cast<std::uint32_t>(tr);
    tile.tile_col = static_cast<std::uint32_t>(tc);
    tile.elem_index = out.elements.size();
    while (i < slots.size() && slots[i].tile_row == tr &&
           slots[i].tile_col == tc) {
      tile.bitmap |= 1ULL << slots[i].bit;
      out.elements.push_back(slots[i].value);
      ++i;
    }
    out.tiles.push_back(tile);
  }
  return out;
}

ElementCoo to_element_coo(const TiledMatrix& m) {
  ElementCoo out;
  out.rows = m.rows;
  out.cols = m.cols;
  out.entries.reserve(m.elements.size());
  for (const auto& tile : m.tiles) {
    std::uint64_t bm = tile.bitmap;
    std::uint64_t idx = tile.elem_index;
    while (bm) {
      const int b = std::countr_zero(bm);
      out.entries.push_back(
          {static_cast<std::uint64_t>(tile.tile_row) * kTileDim + b / kTileDim,
           static_cast<std::uint64_t>(tile.tile_col) * kTileDim + b % kTileDim,
           static_cast<double>(m.elements[idx++])});
      bm &= bm - 1;
    }
  }
  // Bit order within a tile is not global (row, col) order.
  std::sort(out.entries.begin(), out.entries.end(),
            [](const ElementCoo::Entry& a, const ElementCoo::Entry& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  return out;
}

namespace {

// Bits of an 8x8 tile at (tile_row, tile_col) that fall inside rows x cols.
std::uint64_t tile_interior_mask(std::uint64_t rows, std::uint64_t cols,
                                 std::uint32_t tile_row,
                                 std::uint32_t tile_col) {
  const std::uint64_t r =
      std::min<std::uint64_t>(kTileDim, rows - std::uint64_t{tile_row} * kTileDim);
  const std::uint64_t c =
      std::min<std::uint64_t>(kTileDim, cols - std::uint64_t{tile_col} * kTileDim);
  const std::uint64_t row_mask = r == 8 ? ~0ULL : (1ULL << (8 * r)) - 1;
  const std::uint64_t col_mask =
      0x0101010101010101ULL * ((1ULL << c) - 1);
  return row_mask & col_mask;
}

}  // namespace

void validate_tiled(const TiledMatrix& m) {
  std::uint64_t expected_index = 0;
  const TileEntry* prev = nullptr;
  for (const auto& tile : m.tiles) {
    if (prev != nullptr) {
      if (prev->tile_row > tile.tile_row ||
          (prev->tile_row == tile.tile_row &&
           prev->tile_col >= tile.tile_col)) {
        throw InvariantError("tiles unsorted or duplicated at (" +
                             std::to_string(tile.tile_row) + ", " +
                             std::to_string(tile.tile_col) + ")");
      }
    }
    if (tile.tile_row >= m.tile_rows() || tile.tile_col >= m.tile_cols()) {
      throw InvariantError("tile (" + std::to_string(tile.tile_row) + ", " +
                           std::to_string(tile.tile_col) +
                           ") outside the tile grid");
    }
    if (tile.bitmap == 0) {
      throw InvariantError("empty bitmap in tile (" +
                           std::to_string(tile.tile_row) + ", " +
                           std::to_string(tile.tile_col) + ")");
    }
    if (tile.bitmap & ~tile_interior_mask(m.rows, m.cols, tile.tile_row,
                                          tile.tile_col)) {
      throw InvariantError("tile (" + std::to_string(tile.tile_row) + ", " +
                           std::to_string(tile.tile_col) +
                           ") has bits in the padding region");
    }
    if (tile.elem_index != expected_index) {
      throw InvariantError("tile element runs are not contiguous at (" +
                           std::to_string(tile.tile_row) + ", " +
                           std::to_string(tile.tile_col) + ")");
    }
    expected_index += std::popcount(tile.bitmap);
    prev = &tile;
  }
  if (expected_index != m.elements.size()) {
    throw InvariantError("bitmap population " + std::to_string(expected_index) +
                         " != element count " +
                         std::to_string(m.elements.size()));
  }
  for (const float v : m.elements) {
    if (!std::isfinite(v) || v == 0.0f) {
      throw InvariantError("stored element is zero or non-finite");
    }
    if (m.kind == ElementKind::Fp16Stored && !is_binary16(v)) {
      throw InvariantError("fp16-stored element " + std::to_string(v) +
                           " is not binary16-representable");
    }
  }
}

}  // namespace tilemul
