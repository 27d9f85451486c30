// SPDX-License-Identifier: Apache-2.0
#include "tilemul/kernels.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <string>

#include "tilemul/analytics.hpp"
#include "tilemul/errors.hpp"
#include "tilemul/half.hpp"
#include "tilemul/threading.hpp"

namespace tilemul {

void expand_tile(const TileEntry& t, const float* elements, Tile8& out) {
  out.kind = TileKind::Half;
  out.data.fill(0.0f);
  std::uint64_t bm = t.bitmap;
  const float* src = elements + t.elem_index;
  while (bm) {
    out.data[std::countr_zero(bm)] = *src++;
    bm &= bm - 1;
  }
}

void tile_mm_reference(const Tile8& a, const Tile8& b, Tile8& c) {
  for (int i = 0; i < kTileDim; ++i) {
    for (int j = 0; j < kTileDim; ++j) {
      float acc = c.data[i * kTileDim + j];
      for (int k = 0; k < kTileDim; ++k) {
        acc += a.data[i * kTileDim + k] * b.data[k * kTileDim + j];
      }
      c.data[i * kTileDim + j] = acc;
    }
  }
}

std::array<float, 256> paired_product_16x16(const Tile8& a0, const Tile8& b0,
                                            const Tile8& a1, const Tile8& b1,
                                            const Tile8& c0, const Tile8& c1) {
  constexpr int n = 2 * kTileDim;
  std::array<float, 256> lhs{}, rhs{}, out{};
  for (int i = 0; i < kTileDim; ++i) {
    for (int j = 0; j < kTileDim; ++j) {
      lhs[i * n + j] = a0.data[i * kTileDim + j];
      lhs[(i + kTileDim) * n + (j + kTileDim)] = a1.data[i * kTileDim + j];
      rhs[i * n + j] = b0.data[i * kTileDim + j];
      rhs[(i + kTileDim) * n + (j + kTileDim)] = b1.data[i * kTileDim + j];
      out[i * n + j] = c0.data[i * kTileDim + j];
      out[(i + kTileDim) * n + (j + kTileDim)] = c1.data[i * kTileDim + j];
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      float acc = out[i * n + j];
      for (int k = 0; k < n; ++k) {
        acc += lhs[i * n + k] * rhs[k * n + j];
      }
      out[i * n + j] = acc;
    }
  }
  return out;
}

void paired_tile_mm(const Tile8& a0, const Tile8& b0, const Tile8& a1,
                    const Tile8& b1, Tile8& c0, Tile8& c1) {
  constexpr int n = 2 * kTileDim;
  const auto full = paired_product_16x16(a0, b0, a1, b1, c0, c1);
  for (int i = 0; i < kTileDim; ++i) {
    for (int j = 0; j < kTileDim; ++j) {
      c0.data[i * kTileDim + j] = full[i * n + j];
      c1.data[i * kTileDim + j] = full[(i + kTileDim) * n + (j + kTileDim)];
    }
  }
}

CountResult counting_pass(const TiledMatrix& A, const TiledMatrix& B,
                          const TaskList& tl, unsigned threads) {
  const std::size_t nseg = tl.num_segments();
  CountResult cr;
  cr.per_tile_count.resize(nseg);
  parallel_chunks(nseg, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      std::uint64_t occupied = 0;
      for (std::uint64_t p = tl.seg_offsets[s]; p < tl.seg_offsets[s + 1];
           ++p) {
        occupied |= boolean_tile_mm(A.tiles[tl.pairs[p].a_tile].bitmap,
                                    B.tiles[tl.pairs[p].b_tile].bitmap);
      }
      cr.per_tile_count[s] =
          static_cast<std::uint32_t>(std::popcount(occupied));
    }
  });
  cr.elem_offsets.resize(nseg + 1);
  cr.elem_offsets[0] = 0;
  for (std::size_t s = 0; s < nseg; ++s) {
    cr.elem_offsets[s + 1] = cr.elem_offsets[s] + cr.per_tile_count[s];
  }
  cr.total_elements = cr.elem_offsets[nseg];
  return cr;
}

namespace {

// Realizes one accumulated segment: derive the bitmap from exact nonzeros,
// pack values in bit order into the counted slots, flag empty tiles.
void finalize_segment(const Tile8& acc, const TaskList& tl,
                      const CountResult& cr, std::size_t s, MulResult& mr,
                      std::atomic<bool>& nonfinite) {
  std::uint64_t bitmap = 0;
  for (int b = 0; b < kTileSlots; ++b) {
    const float v = acc.data[b];
    if (!std::isfinite(v)) nonfinite.store(true, std::memory_order_relaxed);
    if (v != 0.0f) bitmap |= 1ULL << b;
  }
  float* dst = mr.elements.data() + cr.elem_offsets[s];
  std::uint64_t bm = bitmap;
  while (bm) {
    *dst++ = acc.data[std::countr_zero(bm)];
    bm &= bm - 1;
  }
  mr.tiles[s] = {tl.out_coords[s].tile_row, tl.out_coords[s].tile_col,
                 cr.elem_offsets[s], bitmap};
  mr.empty_flags[s] = bitmap == 0 ? 1 : 0;
}

}  // namespace

MulResult multiply_pass(const TiledMatrix& A, const TiledMatrix& B,
                        const TaskList& tl, const CountResult& cr,
                        const MulOptions& opt) {
  const std::size_t nseg = tl.num_segments();
  MulResult mr;
  mr.rows = A.rows;
  mr.cols = B.cols;
  mr.tiles.resize(nseg);
  mr.elements.assign(cr.total_elements, 0.0f);
  mr.empty_flags.assign(nseg, 0);

  std::atomic<bool> nonfinite{false};

  // Segments write to disjoint ranges, so any worker partition yields the
  // same bytes. With pairing on, consecutive segments ride one 16x16
  // product; the shorter job is padded with zero tiles.
  const std::size_t jobs = opt.pairing ? (nseg + 1) / 2 : nseg;
  parallel_chunks(jobs, opt.threads, [&](std::size_t begin, std::size_t end) {
    Tile8 ea0, eb0, ea1, eb1;
    const Tile8 zero{TileKind::Half, {}};
    Tile8 acc0{TileKind::Accumulator, {}};
    Tile8 acc1{TileKind::Accumulator, {}};
    for (std::size_t job = begin; job < end; ++job) {
      if (!opt.pairing) {
        const std::size_t s = job;
        acc0.data.fill(0.0f);
        for (std::uint64_t p = tl.seg_offsets[s]; p < tl.seg_offsets[s + 1];
             ++p) {
          expand_tile(A.tiles[tl.pairs[p].a_tile], A.elements.data(), ea0);
          expand_tile(B.tiles[tl.pairs[p].b_tile], B.elements.data(), eb0);
          tile_mm_reference(ea0, eb0, acc0);
        }
        finalize_segment(acc0, tl, cr, s, mr, nonfinite);
        continue;
      }
      const std::size_t s0 = 2 * job;
      const std::size_t s1 = s0 + 1;
      const std::uint64_t n0 = tl.seg_offsets[s0 + 1] - tl.seg_offsets[s0];
      const std::uint64_t n1 =
          s1 < nseg ? tl.seg_offsets[s1 + 1] - tl.seg_offsets[s1] : 0;
      acc0.data.fill(0.0f);
      acc1.data.fill(0.0f);
      for (std::uint64_t step = 0; step < std::max(n0, n1); ++step) {
        const Tile8* a0 = &zero;
        const Tile8* b0 = &zero;
        const Tile8* a1 = &zero;
        const Tile8* b1 = &zero;
        if (step < n0) {
          const TilePair& p = tl.pairs[tl.seg_offsets[s0] + step];
          expand_tile(A.tiles[p.a_tile], A.elements.data(), ea0);
          expand_tile(B.tiles[p.b_tile], B.elements.data(), eb0);
          a0 = &ea0;
          b0 = &eb0;
        }
        if (step < n1) {
          const TilePair& p = tl.pairs[tl.seg_offsets[s1] + step];
          expand_tile(A.tiles[p.a_tile], A.elements.data(), ea1);
          expand_tile(B.tiles[p.b_tile], B.elements.data(), eb1);
          a1 = &ea1;
          b1 = &eb1;
        }
        paired_tile_mm(*a0, *b0, *a1, *b1, acc0, acc1);
      }
      finalize_segment(acc0, tl, cr, s0, mr, nonfinite);
      if (s1 < nseg) finalize_segment(acc1, tl, cr, s1, mr, nonfinite);
    }
  });

  if (nonfinite.load()) {
    throw PrecisionError("non-finite accumulator in multiplication pass");
  }
  return mr;
}

TiledMatrix compact(const MulResult& mr) {
  TiledMatrix out;
  out.rows = mr.rows;
  out.cols = mr.cols;
  out.kind = ElementKind::Fp32Stored;
  for (std::size_t s = 0; s < mr.tiles.size(); ++s) {
    if (mr.empty_flags[s]) continue;
    const TileEntry& t = mr.tiles[s];
    const int realized = std::popcount(t.bitmap);
    TileEntry packed{t.tile_row, t.tile_col, out.elements.size(), t.bitmap};
    out.tiles.push_back(packed);
    const float* src = mr.elements.data() + t.elem_index;
    out.elements.insert(out.elements.end(), src, src + realized);
  }
  return out;
}

SquareResult spgemm_square(const TiledMatrix& A, const SquareOptions& options) {
  if (A.rows != A.cols) {
    throw DimensionError("matrix squaring needs a square input, got " +
                         std::to_string(A.rows) + "x" + std::to_string(A.cols));
  }
  const unsigned threads = resolve_threads(options.threads);

  using clock = std::chrono::steady_clock;
  const auto seconds = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };

  SquareResult result;
  result.threads_used = threads;

  const auto t_start = clock::now();

  // fp32-stored inputs are rounded to binary16 first; the kernels consume
  // half-precision operands.
  const TiledMatrix* input = &A;
  TiledMatrix converted;
  if (A.kind == ElementKind::Fp32Stored) {
    converted = A;
    converted.kind = ElementKind::Fp16Stored;
    for (float& v : converted.elements) {
      v = static_cast<float>(round_to_half(static_cast<double>(v)));
    }
    // Rounding can underflow small values to zero, which the bitmap
    // invariant does not allow; rebuild in that case.
    bool any_zero = false;
    for (const float v : converted.elements) any_zero |= v == 0.0f;
    if (any_zero) {
      converted = from_element_coo(to_element_coo(converted),
                                   ElementKind::Fp16Stored);
    }
    input = &converted;
  }

  const auto t_tasklist = clock::now();
  auto raw = enumerate_pairs(*input, *input);
  result.raw_pairs = raw.size();
  auto filtered = filter_zero_products(std::move(raw), *input, *input);
  result.filtered_pairs = filtered.size();

  const auto t_sort = clock::now();
  const TaskList tl = sort_and_segment(std::move(filtered), *input, *input);
  result.output_tiles_allocated = tl.num_segments();

  const auto t_counting = clock::now();
  const CountResult cr = counting_pass(*input, *input, tl, threads);
  result.counted_elements = cr.total_elements;

  const auto t_multiply = clock::now();
  const MulResult mr =
      multiply_pass(*input, *input, tl, cr, {options.pairing, threads});

  const auto t_compaction = clock::now();
  result.output = compact(mr);
  const auto t_end = clock::now();

  result.timing.task_list = seconds(t_tasklist, t_sort);
  result.timing.sort = seconds(t_sort, t_counting);
  result.timing.counting = seconds(t_counting, t_multiply);
  result.timing.multiply = seconds(t_multiply, t_compaction);
  result.timing.compaction = seconds(t_compaction, t_end);
  result.timing.total = seconds(t_start, t_end);

  RunArtifacts artifacts;
  artifacts.input_kind = input->kind;
  artifacts.input_tiles = input->tiles.size();
  artifacts.input_elements = input->elements.size();
  artifacts.raw_pairs = result.raw_pairs;
  artifacts.filtered_pairs = result.filtered_pairs;
  artifacts.segments = result.output_tiles_allocated;
  artifacts.counted_elements = result.counted_elements;
  artifacts.output_tiles = result.output.tiles.size();
  artifacts.output_elements = result.output.elements.size();
  result.memory = memory_report(artifacts);

  return result;
}

}  // namespace tilemul
