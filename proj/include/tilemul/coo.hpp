// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace tilemul {

// Element-level coordinate storage. Entries are sorted by (row, col) with
// no duplicate coordinates; values are carried as fp64.
struct ElementCoo {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;

  struct Entry {
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    double value = 0.0;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  std::vector<Entry> entries;

  friend bool operator==(const ElementCoo&, const ElementCoo&) = default;
};

// Sorts by (row, col) and sums duplicate coordinates in place.
void normalize_coo(ElementCoo& m);

// Throws InvariantError when entries are unsorted, duplicated, or out of
// range.
void validate_coo(const ElementCoo& m);

}  // namespace tilemul
