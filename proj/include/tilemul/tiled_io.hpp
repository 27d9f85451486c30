// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

#include "tilemul/tile_format.hpp"

namespace tilemul {

// Tiled binary layout (little-endian):
//   magic "TSPZ", u32 version = 1, u8 elementKind (0 = fp16 as u16 bit
//   patterns, 1 = fp32), u64 rows, u64 cols, u64 numTiles, u64 numElements,
//   then arrays tileRow u32[], tileCol u32[], bitmap u64[], elemIndex u64[],
//   elements (u16 | f32)[].
void write_tiled_binary(const TiledMatrix& m, std::ostream& out);
void write_tiled_binary(const TiledMatrix& m,
                        const std::filesystem::path& path);

// Throws FormatError on bad magic/version/truncation and InvariantError
// when the decoded matrix violates TiledMatrix invariants.
TiledMatrix read_tiled_binary(std::istream& in);
TiledMatrix read_tiled_binary(const std::filesystem::path& path);

// Serialized bytes of the tiled binary form (used for output hashing).
std::string serialize_tiled(const TiledMatrix& m);

}  // namespace tilemul
