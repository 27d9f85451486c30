// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <istream>

#include "tilemul/coo.hpp"

namespace tilemul {

// Reads a Matrix Market coordinate file. Field may be real, integer or
// pattern (pattern entries get value 1.0); symmetry may be general or
// symmetric (symmetric files are expanded to both triangles, diagonal
// entries once). Indices convert from 1-based to 0-based and duplicate
// coordinates are summed. Throws ParseError on malformed content and
// UnsupportedError for complex fields or array format.
ElementCoo read_matrix_market(const std::filesystem::path& path);
ElementCoo read_matrix_market(std::istream& in);

}  // namespace tilemul
