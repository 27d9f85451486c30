// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tilemul/report.hpp"
#include "tilemul/tile_format.hpp"

namespace tilemul {

// Per-matrix statistics for C = A*A: element and tile nonzero counts,
// intermediate-product counts, and the bitmap density distribution of the
// input tiles (median = lower median, std = population).
struct MatrixStats {
  std::uint64_t dims = 0;
  std::uint64_t nnz_a = 0;
  std::uint64_t nnz_c = 0;
  std::uint64_t nnz_cbar_elements = 0;
  std::uint64_t nnz_c_tiles = 0;
  std::uint64_t nnz_cbar_tiles_raw = 0;       // tile pairs before filtering
  std::uint64_t nnz_cbar_tiles_filtered = 0;  // after zero-product filtering
  double avg_row = 0.0;
  double density_median = 0.0;
  double density_mean = 0.0;
  double density_std = 0.0;
};

// Throws DimensionError for non-square input when square_products is set.
// With square_products off only the input-side fields are filled.
MatrixStats compute_stats(const TiledMatrix& A, bool square_products);

// One approach-selection rule evaluated against the stats.
struct ApproachAdvice {
  std::string approach;
  std::string condition;
  bool recommended = false;
};

struct Advice {
  std::vector<ApproachAdvice> entries;

  bool recommended(const std::string& approach) const;
};

// Threshold evaluation for cuSPARSE, CUSP, RMerge2, Nsparse, AC-SpGEMM,
// spECK plus the global and relaxed global criteria. The intermediate
// ratio uses the filtered tile-pair count unless use_raw_tile_ratio.
Advice advise(const MatrixStats& s, bool use_raw_tile_ratio = false);

// Size inputs for the per-phase byte accounting.
struct RunArtifacts {
  ElementKind input_kind = ElementKind::Fp16Stored;
  std::uint64_t input_tiles = 0;
  std::uint64_t input_elements = 0;
  std::uint64_t raw_pairs = 0;
  std::uint64_t filtered_pairs = 0;
  std::uint64_t segments = 0;
  std::uint64_t counted_elements = 0;
  std::uint64_t output_tiles = 0;
  std::uint64_t output_elements = 0;
};

MemoryReport memory_report(const RunArtifacts& a);

std::string stats_csv_header();
std::string stats_csv_row(const std::string& name, const MatrixStats& s);
std::string stats_to_json(const std::string& name, const MatrixStats& s);
std::string advice_to_json(const Advice& a);

}  // namespace tilemul
