// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

namespace tilemul {

// Wall-clock seconds per pipeline phase.
struct PhaseTiming {
  double task_list = 0.0;
  double sort = 0.0;
  double counting = 0.0;
  double multiply = 0.0;
  double compaction = 0.0;
  double total = 0.0;
};

// Byte accounting per pipeline phase. Sizes follow the tiled binary format
// widths: a tile tuple is 24 bytes (u32 row + u32 col + u64 bitmap + u64
// elemIndex), fp16-stored elements are 2 bytes, fp32 elements 4 bytes, a
// task-list pair 8 bytes, segment offsets u64, per-segment coordinates 8
// bytes, sort keys 20 bytes, counted sizes u32, empty flags 1 byte.
// peak_bytes is the largest concurrent sum across the five phases.
struct MemoryReport {
  std::uint64_t input_tiles_bytes = 0;
  std::uint64_t input_elements_bytes = 0;
  std::uint64_t task_list_bytes = 0;
  std::uint64_t counting_bytes = 0;
  std::uint64_t pre_compaction_bytes = 0;
  std::uint64_t output_bytes = 0;
  std::uint64_t peak_bytes = 0;
};

// One cmd_square/cmd_bench run, serializable to JSON and CSV.
struct RunReport {
  std::string matrix_name;
  std::uint64_t dims = 0;
  std::uint64_t nnz_a = 0;
  std::uint64_t nnz_c = 0;
  PhaseTiming timing;
  MemoryReport memory;
  double smape_vs_fp64 = 0.0;
  unsigned thread_count = 0;
  std::uint64_t seed = 0;
};

std::string to_json(const RunReport& r);

// CSV row for cmd_bench (matches csv_header()).
std::string csv_header();
std::string csv_row(const RunReport& r, unsigned iters,
                    std::uint64_t output_hash);

}  // namespace tilemul
