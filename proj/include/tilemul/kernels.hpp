// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tilemul/pipeline.hpp"
#include "tilemul/report.hpp"
#include "tilemul/tile_format.hpp"

namespace tilemul {

// Boolean upper-bound sizing of each output tile.
struct CountResult {
  std::vector<std::uint32_t> per_tile_count;   // popcount of OR'd products
  std::vector<std::uint64_t> elem_offsets;     // exclusive prefix sum, n+1
  std::uint64_t total_elements = 0;
};

// Pre-compaction multiply output. Tiles follow TaskList segment order;
// element slots beyond a tile's realized NNZ stay zero within its counted
// allocation.
struct MulResult {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::vector<TileEntry> tiles;            // bitmap == 0 marks empty
  std::vector<float> elements;             // length = counted total
  std::vector<std::uint8_t> empty_flags;   // 1 per segment
};

// Expands a stored tile into dense scratch (elements placed per bitmap).
void expand_tile(const TileEntry& t, const float* elements, Tile8& out);

// c[i][j] += sum_k a[i][k] * b[k][j], k ascending, one fp32 add per
// product. Products of binary16 operands are exact in fp32, so this order
// fully determines the result bits.
void tile_mm_reference(const Tile8& a, const Tile8& b, Tile8& c);

// Full 16x16 product with (a0, a1), (b0, b1), (c0, c1) embedded on the
// diagonals; off-diagonal blocks of the result are exactly zero.
std::array<float, 256> paired_product_16x16(const Tile8& a0, const Tile8& b0,
                                            const Tile8& a1, const Tile8& b1,
                                            const Tile8& c0, const Tile8& c1);

// Two tile MACs batched through one diagonal 16x16 multiply; bit-exact
// equal to two tile_mm_reference calls.
void paired_tile_mm(const Tile8& a0, const Tile8& b0, const Tile8& a1,
                    const Tile8& b1, Tile8& c0, Tile8& c1);

// Per-segment popcount of the OR-accumulated boolean tile products.
CountResult counting_pass(const TiledMatrix& A, const TiledMatrix& B,
                          const TaskList& tl, unsigned threads = 1);

struct MulOptions {
  bool pairing = true;
  unsigned threads = 1;
};

// Mixed-precision MAC over segments into the counted allocation. Throws
// PrecisionError when any accumulator is non-finite.
MulResult multiply_pass(const TiledMatrix& A, const TiledMatrix& B,
                        const TaskList& tl, const CountResult& cr,
                        const MulOptions& opt = {});

// Drops empty tiles and packs elements to realized NNZ.
TiledMatrix compact(const MulResult& mr);

struct SquareOptions {
  bool pairing = true;
  unsigned threads = 0;  // 0 = TILEMUL_THREADS or hardware concurrency
};

struct SquareResult {
  TiledMatrix output;
  PhaseTiming timing;
  MemoryReport memory;
  std::uint64_t raw_pairs = 0;
  std::uint64_t filtered_pairs = 0;
  std::uint64_t output_tiles_allocated = 0;
  std::uint64_t counted_elements = 0;
  unsigned threads_used = 1;
};

// Full pipeline for C = A*A. Fp32-stored inputs are converted to fp16
// first; that conversion is timed into `total` but is not a named phase.
// Throws DimensionError for non-square A and propagates PrecisionError.
SquareResult spgemm_square(const TiledMatrix& A,
                           const SquareOptions& options = {});

}  // namespace tilemul
