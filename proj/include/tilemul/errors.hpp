// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace tilemul {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed textual input (Matrix Market banner, dimensions, entries).
struct ParseError : Error {
  using Error::Error;
};

// Input uses a Matrix Market feature we do not handle (complex field,
// array format, skew-symmetric/hermitian symmetry).
struct UnsupportedError : ParseError {
  using ParseError::ParseError;
};

struct IoError : Error {
  using Error::Error;
};

// Tiled binary file is structurally broken (bad magic, version, truncation).
struct FormatError : Error {
  using Error::Error;
};

// Data violates a TiledMatrix invariant (unsorted tiles, bitmap/element
// count mismatch, non-finite or non-representable element).
struct InvariantError : Error {
  using Error::Error;
};

// Value outside the binary16 finite range.
struct OverflowError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

// Non-finite accumulator produced by the multiplication pass.
struct PrecisionError : Error {
  using Error::Error;
};

}  // namespace tilemul
