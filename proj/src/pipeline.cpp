// SPDX-License-Identifier: Apache-2.0
#include "tilemul/pipeline.hpp"

#include <algorithm>
#include <string>

#include "tilemul/errors.hpp"

namespace tilemul {

std::uint64_t boolean_tile_mm(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  for (int k = 0; k < kTileDim; ++k) {
    // Byte i of col is 1 iff a(i,k); multiplying broadcasts row k of b
    // into exactly those bytes (no carries, row fits one byte).
    const std::uint64_t col = (a >> k) & 0x0101010101010101ULL;
    const std::uint64_t row = (b >> (kTileDim * k)) & 0xFFULL;
    out |= col * row;
  }
  return out;
}

bool tile_product_nonzero(std::uint64_t a, std::uint64_t b) {
  // OR of the eight row bytes of a = mask of its non-empty columns.
  std::uint64_t t = a | (a >> 32);
  t |= t >> 16;
  t |= t >> 8;
  const std::uint64_t cols_a = t & 0xFF;

  std::uint64_t rows_b = 0;
  for (int k = 0; k < kTileDim; ++k) {
    if ((b >> (kTileDim * k)) & 0xFF) rows_b |= 1ULL << k;
  }
  return (cols_a & rows_b) != 0;
}

std::vector<TilePair> enumerate_pairs(const TiledMatrix& A,
                                      const TiledMatrix& B) {
  if (A.cols != B.rows) {
    throw DimensionError("inner dimensions differ: A is " +
                         std::to_string(A.rows) + "x" + std::to_string(A.cols) +
                         ", B is " + std::to_string(B.rows) + "x" +
                         std::to_string(B.cols));
  }
  // B tiles are sorted by (tileRow, tileCol): tile rows are contiguous runs.
  std::vector<std::uint64_t> row_start(B.tile_rows() + 1, 0);
  for (const auto& t : B.tiles) row_start[t.tile_row + 1]++;
  for (std::size_t r = 1; r < row_start.size(); ++r) {
    row_start[r] += row_start[r - 1];
  }

  std::vector<TilePair> pairs;
  for (std::uint32_t ia = 0; ia < A.tiles.size(); ++ia) {
    const std::uint32_t k = A.tiles[ia].tile_col;
    for (std::uint64_t ib = row_start[k]; ib < row_start[k + 1]; ++ib) {
      pairs.push_back({ia, static_cast<std::uint32_t>(ib)});
    }
  }
  return pairs;
}

std::vector<TilePair> filter_zero_products(std::vector<TilePair> pairs,
                                           const TiledMatrix& A,
                                           const TiledMatrix& B) {
  std::erase_if(pairs, [&](const TilePair& p) {
    return !tile_product_nonzero(A.tiles[p.a_tile].bitmap,
                                 B.tiles[p.b_tile].bitmap);
  });
  return pairs;
}

TaskList sort_and_segment(std::vector<TilePair> pairs, const TiledMatrix& A,
                          const TiledMatrix& B) {
  struct Keyed {
    std::uint32_t out_row;
    std::uint32_t out_col;
    std::uint32_t inner;
    TilePair pair;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(pairs.size());
  for (const TilePair& p : pairs) {
    keyed.push_back({A.tiles[p.a_tile].tile_row, B.tiles[p.b_tile].tile_col,
                     A.tiles[p.a_tile].tile_col, p});
  }
  // (out_row, out_col, inner) is a unique key, so the order is total and
  // any sort yields the same deterministic result.
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.out_row != b.out_row) return a.out_row < b.out_row;
    if (a.out_col != b.out_col) return a.out_col < b.out_col;
    return a.inner < b.inner;
  });

  TaskList tl;
  tl.pairs.resize(keyed.size());
  tl.seg_offsets.push_back(0);
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    tl.pairs[i] = keyed[i].pair;
    const bool new_segment = i == 0 ||
                             keyed[i].out_row != keyed[i - 1].out_row ||
                             keyed[i].out_col != keyed[i - 1].out_col;
    if (new_segment) {
      if (i > 0) tl.seg_offsets.push_back(i);
      tl.out_coords.push_back({keyed[i].out_row, keyed[i].out_col});
    }
  }
  if (!keyed.empty()) tl.seg_offsets.push_back(keyed.size());
  return tl;
}

}  // namespace tilemul
