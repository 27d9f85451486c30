// SPDX-License-Identifier: Apache-2.0
#include "tilemul/analytics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "tilemul/errors.hpp"
#include "tilemul/oracle.hpp"
#include "tilemul/pipeline.hpp"

namespace tilemul {

MatrixStats compute_stats(const TiledMatrix& A, bool square_products) {
  if (square_products && A.rows != A.cols) {
    throw DimensionError("statistics for A*A need a square matrix, got " +
                         std::to_string(A.rows) + "x" +
                         std::to_string(A.cols));
  }

  MatrixStats s;
  s.dims = A.rows;
  s.nnz_a = A.elements.size();
  s.avg_row = s.dims == 0 ? 0.0
                          : static_cast<double>(s.nnz_a) /
                                static_cast<double>(s.dims);

  // Bitmap density distribution over the input tiles.
  if (!A.tiles.empty()) {
    std::vector<int> pops;
    pops.reserve(A.tiles.size());
    double sum = 0.0;
    for (const auto& t : A.tiles) {
      pops.push_back(std::popcount(t.bitmap));
      sum += pops.back();
    }
    std::sort(pops.begin(), pops.end());
    s.density_median = pops[(pops.size() - 1) / 2];  // lower median
    s.density_mean = sum / static_cast<double>(pops.size());
    double var = 0.0;
    for (const int p : pops) {
      var += (p - s.density_mean) * (p - s.density_mean);
    }
    s.density_std = std::sqrt(var / static_cast<double>(pops.size()));
  }

  if (!square_products) return s;

  // Intermediate element products, counted analytically: each a(i,k)
  // meets every element of row k, so the total is sum_k colnnz(k)*rownnz(k).
  {
    std::vector<std::uint32_t> row_nnz(A.rows, 0);
    std::vector<std::uint32_t> col_nnz(A.cols, 0);
    const ElementCoo coo = to_element_coo(A);
    for (const auto& e : coo.entries) {
      row_nnz[e.row]++;
      col_nnz[e.col]++;
    }
    for (std::uint64_t k = 0; k < A.rows; ++k) {
      s.nnz_cbar_elements += static_cast<std::uint64_t>(col_nnz[k]) *
                             static_cast<std::uint64_t>(row_nnz[k]);
    }

    // Output nonzeros from the exact fp64 reference positions.
    const ElementCoo C = dense_spgemm_fp64(coo, coo);
    s.nnz_c = C.entries.size();
    std::vector<std::uint64_t> tile_keys;
    tile_keys.reserve(C.entries.size());
    for (const auto& e : C.entries) {
      tile_keys.push_back((e.row / kTileDim) * ((A.cols / kTileDim) + 1) +
                          e.col / kTileDim);
    }
    std::sort(tile_keys.begin(), tile_keys.end());
    s.nnz_c_tiles = std::unique(tile_keys.begin(), tile_keys.end()) -
                    tile_keys.begin();
  }

  auto raw = enumerate_pairs(A, A);
  s.nnz_cbar_tiles_raw = raw.size();
  s.nnz_cbar_tiles_filtered = filter_zero_products(std::move(raw), A, A).size();
  return s;
}

bool Advice::recommended(const std::string& approach) const {
  for (const auto& e : entries) {
    if (e.approach == approach) return e.recommended;
  }
  return false;
}

Advice advise(const MatrixStats& s, bool use_raw_tile_ratio) {
  const std::uint64_t tile_pairs =
      use_raw_tile_ratio ? s.nnz_cbar_tiles_raw : s.nnz_cbar_tiles_filtered;
  const double ratio = tile_pairs == 0
                           ? 0.0
                           : static_cast<double>(s.nnz_cbar_elements) /
                                 static_cast<double>(tile_pairs);

  Advice a;
  a.entries = {
      {"cuSPARSE", "NNZ(A) > 200000", s.nnz_a > 200000},
      {"CUSP", "NNZ(Cbar) / NNZ(Cbar_tiles) >= 1", ratio >= 1.0},
      {"RMerge2", "avgRowA > 42 AND NNZ(A) > 100000",
       s.avg_row > 42.0 && s.nnz_a > 100000},
      {"Nsparse", "avgRowA > 42 AND NNZ(A) > 100000",
       s.avg_row > 42.0 && s.nnz_a > 100000},
      {"AC-SpGEMM", "NNZ(Cbar) / NNZ(Cbar_tiles) > 9", ratio > 9.0},
      {"spECK", "avgRowA > 42 AND NNZ(A) > 300000",
       s.avg_row > 42.0 && s.nnz_a > 300000},
      {"global", "NNZ(A) > 300000 AND avgRowA > 42",
       s.nnz_a > 300000 && s.avg_row > 42.0},
      {"globalRelaxed", "NNZ(A) > 300000 AND avgRowA > 21",
       s.nnz_a > 300000 && s.avg_row > 21.0},
  };
  return a;
}

MemoryReport memory_report(const RunArtifacts& a) {
  constexpr std::uint64_t kTileTupleBytes = 24;  // u32 + u32 + u64 + u64
  constexpr std::uint64_t kPairBytes = 8;
  constexpr std::uint64_t kSortKeyBytes = 20;
  const std::uint64_t elem_width =
      a.input_kind == ElementKind::Fp16Stored ? 2 : 4;

  MemoryReport r;
  r.input_tiles_bytes = a.input_tiles * kTileTupleBytes;
  r.input_elements_bytes = a.input_elements * elem_width;
  const std::uint64_t input = r.input_tiles_bytes + r.input_elements_bytes;

  const std::uint64_t seg_offsets = (a.segments + 1) * 8;
  const std::uint64_t out_coords = a.segments * 8;
  r.task_list_bytes = a.filtered_pairs * kPairBytes + seg_offsets + out_coords;
  r.counting_bytes = a.segments * 4 + (a.segments + 1) * 8;
  r.pre_compaction_bytes =
      a.segments * kTileTupleBytes + a.counted_elements * 4 + a.segments;
  r.output_bytes = a.output_tiles * kTileTupleBytes + a.output_elements * 4;

  const std::uint64_t phase_task_list = input + a.raw_pairs * kPairBytes;
  const std::uint64_t phase_sort = input + a.filtered_pairs * kPairBytes +
                                   a.filtered_pairs * kSortKeyBytes +
                                   seg_offsets + out_coords;
  const std::uint64_t phase_counting =
      input + r.task_list_bytes + r.counting_bytes;
  const std::uint64_t phase_multiply =
      phase_counting + r.pre_compaction_bytes;
  const std::uint64_t phase_compaction =
      input + r.counting_bytes + r.pre_compaction_bytes + r.output_bytes;
  r.peak_bytes = std::max({phase_task_list, phase_sort, phase_counting,
                           phase_multiply, phase_compaction});
  return r;
}

std::string stats_csv_header() {
  return "matrixName,dims,nnzA,nnzC,nnzCbar,nnzCtiles,nnzCbarTilesRaw,"
         "nnzCbarTilesFiltered,densityMedian,densityMean,densityStd,avgRow";
}

std::string stats_csv_row(const std::string& name, const MatrixStats& s) {
  std::ostringstream ss;
  ss.precision(6);
  ss << name << ',' << s.dims << ',' << s.nnz_a << ',' << s.nnz_c << ','
     << s.nnz_cbar_elements << ',' << s.nnz_c_tiles << ','
     << s.nnz_cbar_tiles_raw << ',' << s.nnz_cbar_tiles_filtered << ','
     << s.density_median << ',' << s.density_mean << ',' << s.density_std
     << ',' << s.avg_row;
  return ss.str();
}

std::string stats_to_json(const std::string& name, const MatrixStats& s) {
  nlohmann::ordered_json j;
  j["matrixName"] = name;
  j["dims"] = s.dims;
  j["nnzA"] = s.nnz_a;
  j["nnzC"] = s.nnz_c;
  j["nnzCbar"] = s.nnz_cbar_elements;
  j["nnzCtiles"] = s.nnz_c_tiles;
  j["nnzCbarTilesRaw"] = s.nnz_cbar_tiles_raw;
  j["nnzCbarTilesFiltered"] = s.nnz_cbar_tiles_filtered;
  j["densityMedian"] = s.density_median;
  j["densityMean"] = s.density_mean;
  j["densityStd"] = s.density_std;
  j["avgRow"] = s.avg_row;
  return j.dump(2);
}

std::string advice_to_json(const Advice& a) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& e : a.entries) {
    j.push_back({{"approach", e.approach},
                 {"condition", e.condition},
                 {"recommended", e.recommended}});
  }
  return j.dump(2);
}

}  // namespace tilemul
