// SPDX-License-Identifier: Apache-2.0
#include "tilemul/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tilemul/errors.hpp"
#include "tilemul/half.hpp"

namespace tilemul {

namespace {

void require_same_inner(const ElementCoo& A, const ElementCoo& B) {
  if (A.cols != B.rows) {
    throw DimensionError("inner dimensions differ: " + std::to_string(A.cols) +
                         " vs " + std::to_string(B.rows));
  }
}

// Row start offsets into sorted COO entries.
std::vector<std::uint64_t> row_offsets(const ElementCoo& m) {
  std::vector<std::uint64_t> offsets(m.rows + 1, 0);
  for (const auto& e : m.entries) offsets[e.row + 1]++;
  for (std::uint64_t r = 1; r <= m.rows; ++r) offsets[r] += offsets[r - 1];
  return offsets;
}

// Row-by-row sparse accumulation. A's rows are sorted by column, so every
// output element receives its products in ascending k, matching the
// per-element order of a plain triple loop.
template <typename Acc, typename MulAdd>
ElementCoo spgemm_rows(const ElementCoo& A, const ElementCoo& B,
                       MulAdd mul_add) {
  const auto a_rows = row_offsets(A);
  const auto b_rows = row_offsets(B);

  ElementCoo C;
  C.rows = A.rows;
  C.cols = B.cols;

  std::vector<Acc> acc(B.cols, Acc{0});
  std::vector<std::uint8_t> occupied(B.cols, 0);
  std::vector<std::uint64_t> touched;

  for (std::uint64_t i = 0; i < A.rows; ++i) {
    touched.clear();
    for (std::uint64_t ai = a_rows[i]; ai < a_rows[i + 1]; ++ai) {
      const auto& a = A.entries[ai];
      for (std::uint64_t bi = b_rows[a.col]; bi < b_rows[a.col + 1]; ++bi) {
        const auto& b = B.entries[bi];
        if (!occupied[b.col]) {
          occupied[b.col] = 1;
          touched.push_back(b.col);
        }
        mul_add(acc[b.col], a.value, b.value);
      }
    }
    std::sort(touched.begin(), touched.end());
    for (const std::uint64_t j : touched) {
      if (acc[j] != Acc{0}) {
        C.entries.push_back({i, j, static_cast<double>(acc[j])});
      }
      acc[j] = Acc{0};
      occupied[j] = 0;
    }
  }
  return C;
}

}  // namespace

DenseMatrix to_dense(const ElementCoo& m) {
  DenseMatrix d;
  d.rows = m.rows;
  d.cols = m.cols;
  d.data.assign(m.rows * m.cols, 0.0);
  for (const auto& e : m.entries) d.at(e.row, e.col) = e.value;
  return d;
}

ElementCoo from_dense(const DenseMatrix& m) {
  ElementCoo out;
  out.rows = m.rows;
  out.cols = m.cols;
  for (std::uint64_t r = 0; r < m.rows; ++r) {
    for (std::uint64_t c = 0; c < m.cols; ++c) {
      if (m.at(r, c) != 0.0) out.entries.push_back({r, c, m.at(r, c)});
    }
  }
  return out;
}

ElementCoo dense_spgemm_fp64(const ElementCoo& A, const ElementCoo& B) {
  require_same_inner(A, B);
  return spgemm_rows<double>(A, B, [](double& acc, double a, double b) {
    acc += a * b;
  });
}

ElementCoo dense_spgemm_mixed_ordered(const ElementCoo& A,
                                      const ElementCoo& B) {
  require_same_inner(A, B);

  const auto rounded = [](const ElementCoo& m) {
    ElementCoo r = m;
    std::erase_if(r.entries, [](ElementCoo::Entry& e) {
      e.value = round_to_half(e.value);
      return e.value == 0.0;
    });
    return r;
  };
  const ElementCoo Ah = rounded(A);
  const ElementCoo Bh = rounded(B);

  return spgemm_rows<float>(Ah, Bh, [](float& acc, double a, double b) {
    // binary16 x binary16 is exact in fp32; the add is the only rounding.
    acc += static_cast<float>(a) * static_cast<float>(b);
  });
}

double smape(const ElementCoo& X, const ElementCoo& Y) {
  if (X.rows != Y.rows || X.cols != Y.cols) {
    throw DimensionError("SMAPE operands must have equal dimensions");
  }
  const auto key = [](const ElementCoo::Entry& e) {
    return std::pair<std::uint64_t, std::uint64_t>(e.row, e.col);
  };
  double sum = 0.0;
  std::uint64_t n = 0;
  std::size_t ix = 0, iy = 0;
  while (ix < X.entries.size() || iy < Y.entries.size()) {
    double x = 0.0, y = 0.0;
    if (iy >= Y.entries.size() ||
        (ix < X.entries.size() && key(X.entries[ix]) < key(Y.entries[iy]))) {
      x = X.entries[ix++].value;
    } else if (ix >= X.entries.size() ||
               key(Y.entries[iy]) < key(X.entries[ix])) {
      y = Y.entries[iy++].value;
    } else {
      x = X.entries[ix++].value;
      y = Y.entries[iy++].value;
    }
    if (x == 0.0 && y == 0.0) continue;  // explicit zeros are not NZ
    ++n;
    sum += std::fabs(x - y) / (std::fabs(x) + std::fabs(y));
  }
  return n == 0 ? 0.0 : 100.0 * sum / static_cast<double>(n);
}

}  // namespace tilemul
