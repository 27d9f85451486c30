// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "tilemul/coo.hpp"

namespace tilemul {

// Row-major fp64 dense matrix, used by desk-scale reference checks.
struct DenseMatrix {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::vector<double> data;

  double& at(std::uint64_t r, std::uint64_t c) { return data[r * cols + c]; }
  double at(std::uint64_t r, std::uint64_t c) const {
    return data[r * cols + c];
  }
};

DenseMatrix to_dense(const ElementCoo& m);
ElementCoo from_dense(const DenseMatrix& m);

// Exact-semantics fp64 product: per output element, products accumulate in
// ascending k. Exact zeros are dropped. Works element-wise on COO rows, so
// it shares nothing with the tiled pipeline.
ElementCoo dense_spgemm_fp64(const ElementCoo& A, const ElementCoo& B);

// Mixed-precision reference mirroring the pipeline's ordering: inputs
// round to binary16, each product is exact in fp32, accumulation is one
// fp32 add per product in ascending k. Throws OverflowError when rounding
// leaves the binary16 range.
ElementCoo dense_spgemm_mixed_ordered(const ElementCoo& A,
                                      const ElementCoo& B);

// Symmetric mean absolute percentage error over the union of nonzero
// positions (missing positions count as zero). Returns a percentage in
// [0, 100]; empty union gives 0.
double smape(const ElementCoo& X, const ElementCoo& Y);

}  // namespace tilemul
