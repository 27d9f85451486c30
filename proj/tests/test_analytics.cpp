// SPDX-License-Identifier: Apache-2.0
#include <random>

#include "doctest.h"
#include "support/corpus.hpp"
#include "tilemul/analytics.hpp"
#include "tilemul/errors.hpp"
#include "tilemul/kernels.hpp"
#include "tilemul/tile_format.hpp"

using namespace tilemul;
using testsupport::identity_coo;
using testsupport::make_random_coo;
using testsupport::ValueMode;

TEST_SUITE("analytics") {
  TEST_CASE("stats of the 64x64 identity") {
    const TiledMatrix I =
        from_element_coo(identity_coo(64), ElementKind::Fp16Stored);
    const MatrixStats s = compute_stats(I, true);
    CHECK(s.dims == 64);
    CHECK(s.nnz_a == 64);
    CHECK(s.avg_row == 1.0);
    CHECK(s.density_mean == 8.0);
    CHECK(s.density_median == 8.0);
    CHECK(s.density_std == 0.0);
    CHECK(s.nnz_cbar_elements == 64);
    CHECK(s.nnz_c == 64);
    CHECK(s.nnz_c_tiles == 8);
    CHECK(s.nnz_cbar_tiles_raw == 8);
    CHECK(s.nnz_cbar_tiles_filtered == 8);
  }

  TEST_CASE("stats of an empty matrix are all zero") {
    const TiledMatrix empty{.rows = 64, .cols = 64};
    const MatrixStats s = compute_stats(empty, true);
    CHECK(s.nnz_a == 0);
    CHECK(s.nnz_c == 0);
    CHECK(s.nnz_cbar_elements == 0);
    CHECK(s.nnz_c_tiles == 0);
    CHECK(s.nnz_cbar_tiles_raw == 0);
    CHECK(s.nnz_cbar_tiles_filtered == 0);
    CHECK(s.avg_row == 0.0);
    CHECK(s.density_mean == 0.0);
  }

  TEST_CASE("non-square input fails when squaring is requested") {
    const TiledMatrix rect{.rows = 8, .cols = 16};
    CHECK_THROWS_AS(compute_stats(rect, true), DimensionError);
    CHECK_NOTHROW(compute_stats(rect, false));
  }

  TEST_CASE("intermediate counts dominate outputs") {
    std::mt19937_64 rng(157);
    for (int rep = 0; rep < 5; ++rep) {
      const TiledMatrix A = from_element_coo(
          make_random_coo(rng, 160, 160, 0.03, ValueMode::SignedHalves),
          ElementKind::Fp16Stored);
      const MatrixStats s = compute_stats(A, true);
      CHECK(s.nnz_cbar_elements >= s.nnz_c);
      CHECK(s.nnz_cbar_tiles_filtered >= s.nnz_c_tiles);
      CHECK(s.nnz_cbar_tiles_filtered <= s.nnz_cbar_tiles_raw);
      CHECK(s.density_median >= 1.0);
      CHECK(s.density_median <= 64.0);
      CHECK(s.density_mean >= 1.0);
      CHECK(s.density_mean <= 64.0);
    }
  }

  TEST_CASE("advise evaluates the published thresholds") {
    MatrixStats s;
    s.nnz_a = 400000;
    s.avg_row = 50.0;
    s.nnz_cbar_elements = 100;
    s.nnz_cbar_tiles_filtered = 100;  // ratio 1
    Advice a = advise(s);
    CHECK(a.recommended("RMerge2"));
    CHECK(a.recommended("Nsparse"));
    CHECK(a.recommended("spECK"));
    CHECK(a.recommended("global"));
    CHECK(a.recommended("globalRelaxed"));
    CHECK(a.recommended("cuSPARSE"));
    CHECK(a.recommended("CUSP"));       // ratio >= 1
    CHECK(!a.recommended("AC-SpGEMM"));  // ratio not > 9

    s.nnz_a = 150000;
    a = advise(s);
    CHECK(!a.recommended("cuSPARSE"));
    CHECK(!a.recommended("spECK"));
    CHECK(!a.recommended("global"));
    CHECK(a.recommended("RMerge2"));  // 150000 > 100000 and avgRow > 42

    s.nnz_cbar_elements = 1000;
    s.nnz_cbar_tiles_filtered = 100;  // ratio 10
    a = advise(s);
    CHECK(a.recommended("AC-SpGEMM"));
  }

  TEST_CASE("ratio switch uses the raw pair count") {
    MatrixStats s;
    s.nnz_cbar_elements = 1000;
    s.nnz_cbar_tiles_filtered = 100;  // ratio 10 -> AC-SpGEMM true
    s.nnz_cbar_tiles_raw = 200;       // ratio 5  -> AC-SpGEMM false
    CHECK(advise(s, false).recommended("AC-SpGEMM"));
    CHECK(!advise(s, true).recommended("AC-SpGEMM"));
  }

  TEST_CASE("advice is monotone in nnzA and avgRow") {
    std::mt19937_64 rng(163);
    std::uniform_int_distribution<std::uint64_t> nnz_dist(0, 600000);
    std::uniform_real_distribution<double> row_dist(0.0, 80.0);
    for (int rep = 0; rep < 500; ++rep) {
      MatrixStats lo;
      lo.nnz_a = nnz_dist(rng);
      lo.avg_row = row_dist(rng);
      lo.nnz_cbar_elements = 500;
      lo.nnz_cbar_tiles_filtered = 100;
      MatrixStats hi = lo;
      hi.nnz_a += nnz_dist(rng) / 2;
      hi.avg_row += row_dist(rng) / 2;
      const Advice a_lo = advise(lo);
      const Advice a_hi = advise(hi);
      for (std::size_t i = 0; i < a_lo.entries.size(); ++i) {
        if (a_lo.entries[i].recommended) CHECK(a_hi.entries[i].recommended);
      }
    }
  }

  TEST_CASE("memory accounting of a zero-tile run") {
    const MemoryReport r = memory_report(RunArtifacts{});
    CHECK(r.input_tiles_bytes == 0);
    CHECK(r.input_elements_bytes == 0);
    CHECK(r.output_bytes == 0);
    // Only the fixed offset-array headers remain.
    CHECK(r.task_list_bytes == 8);
    CHECK(r.counting_bytes == 8);
    CHECK(r.peak_bytes == 16);
  }

  TEST_CASE("memory accounting of one full tile squared") {
    RunArtifacts a;
    a.input_kind = ElementKind::Fp16Stored;
    a.input_tiles = 1;
    a.input_elements = 64;
    a.raw_pairs = 1;
    a.filtered_pairs = 1;
    a.segments = 1;
    a.counted_elements = 64;
    a.output_tiles = 1;
    a.output_elements = 64;
    const MemoryReport r = memory_report(a);
    CHECK(r.input_tiles_bytes == 24);
    CHECK(r.input_elements_bytes == 128);
    CHECK(r.task_list_bytes == 8 + 16 + 8);
    CHECK(r.counting_bytes == 4 + 16);
    CHECK(r.pre_compaction_bytes == 24 + 256 + 1);
    CHECK(r.output_bytes == 24 + 256);
    // Peak lands in the compaction phase: input + counting + pre + output.
    CHECK(r.peak_bytes == 152 + 20 + 281 + 280);

    // Consistent with an actual run of that matrix.
    ElementCoo coo;
    coo.rows = coo.cols = 8;
    for (std::uint64_t r2 = 0; r2 < 8; ++r2) {
      for (std::uint64_t c2 = 0; c2 < 8; ++c2) {
        coo.entries.push_back({r2, c2, 1.0});
      }
    }
    const SquareResult res =
        spgemm_square(from_element_coo(coo, ElementKind::Fp16Stored));
    CHECK(res.memory.peak_bytes == r.peak_bytes);
    CHECK(res.memory.output_bytes == r.output_bytes);
  }

  TEST_CASE("peak is at least the final output size") {
    std::mt19937_64 rng(167);
    for (int rep = 0; rep < 5; ++rep) {
      const TiledMatrix A = from_element_coo(
          make_random_coo(rng, 200, 200, 0.02, ValueMode::SignedHalves),
          ElementKind::Fp16Stored);
      const SquareResult res = spgemm_square(A);
      CHECK(res.memory.peak_bytes >= res.memory.output_bytes);
      CHECK(res.memory.peak_bytes >=
            res.memory.input_tiles_bytes + res.memory.input_elements_bytes);
    }
  }
}
