// SPDX-License-Identifier: Apache-2.0
#include "tilemul/tiled_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tilemul/errors.hpp"
#include "tilemul/half.hpp"

static_assert(std::endian::native == std::endian::little,
              "tiled binary I/O assumes a little-endian host");

namespace tilemul {

namespace {

constexpr char kMagic[4] = {'T', 'S', 'P', 'Z'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw FormatError("truncated tiled binary file");
  return v;
}

template <typename T>
std::vector<T> get_array(std::istream& in, std::uint64_t n) {
  if (n > (1ULL << 40)) {
    throw FormatError("implausible array length " + std::to_string(n));
  }
  std::vector<T> v;
  try {
    v.resize(n);
  } catch (const std::bad_alloc&) {
    throw FormatError("array length " + std::to_string(n) +
                      " exceeds available memory");
  }
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(n * sizeof(T)));
  if (!in) throw FormatError("truncated tiled binary file");
  return v;
}

}  // namespace

void write_tiled_binary(const TiledMatrix& m, std::ostream& out) {
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(m.kind));
  put<std::uint64_t>(out, m.rows);
  put<std::uint64_t>(out, m.cols);
  put<std::uint64_t>(out, m.tiles.size());
  put<std::uint64_t>(out, m.elements.size());
  for (const auto& t : m.tiles) put<std::uint32_t>(out, t.tile_row);
  for (const auto& t : m.tiles) put<std::uint32_t>(out, t.tile_col);
  for (const auto& t : m.tiles) put<std::uint64_t>(out, t.bitmap);
  for (const auto& t : m.tiles) put<std::uint64_t>(out, t.elem_index);
  if (m.kind == ElementKind::Fp16Stored) {
    for (const float v : m.elements) {
      put<std::uint16_t>(out, half_bits_from_float(v));
    }
  } else {
    out.write(reinterpret_cast<const char*>(m.elements.data()),
              static_cast<std::streamsize>(m.elements.size() * sizeof(float)));
  }
  if (!out) throw IoError("write to tiled binary stream failed");
}

void write_tiled_binary(const TiledMatrix& m,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_tiled_binary(m, out);
}

TiledMatrix read_tiled_binary(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError("bad magic, not a tiled binary file");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) {
    throw FormatError("unsupported tiled binary version " +
                      std::to_string(version));
  }
  const auto kind_byte = get<std::uint8_t>(in);
  if (kind_byte > 1) {
    throw FormatError("unknown element kind " + std::to_string(kind_byte));
  }

  TiledMatrix m;
  m.kind = static_cast<ElementKind>(kind_byte);
  m.rows = get<std::uint64_t>(in);
  m.cols = get<std::uint64_t>(in);
  const auto num_tiles = get<std::uint64_t>(in);
  const auto num_elements = get<std::uint64_t>(in);

  // Check the declared payload against the remaining bytes before
  // allocating, so hostile headers fail as truncation, not bad_alloc.
  const auto pos = in.tellg();
  if (pos != std::istream::pos_type(-1)) {
    in.seekg(0, std::ios::end);
    const auto end = in.tellg();
    in.seekg(pos);
    const auto remaining = static_cast<std::uint64_t>(end - pos);
    const std::uint64_t elem_width =
        m.kind == ElementKind::Fp16Stored ? 2 : 4;
    if (num_tiles > remaining / 24 ||
        num_elements > remaining / elem_width) {
      throw FormatError("truncated tiled binary file");
    }
  }

  const auto tile_rows = get_array<std::uint32_t>(in, num_tiles);
  const auto tile_cols = get_array<std::uint32_t>(in, num_tiles);
  const auto bitmaps = get_array<std::uint64_t>(in, num_tiles);
  const auto elem_indices = get_array<std::uint64_t>(in, num_tiles);

  m.tiles.resize(num_tiles);
  for (std::uint64_t i = 0; i < num_tiles; ++i) {
    m.tiles[i] = {tile_rows[i], tile_cols[i], elem_indices[i], bitmaps[i]};
  }

  if (m.kind == ElementKind::Fp16Stored) {
    const auto bits = get_array<std::uint16_t>(in, num_elements);
    m.elements.resize(num_elements);
    for (std::uint64_t i = 0; i < num_elements; ++i) {
      m.elements[i] = half_bits_to_float(bits[i]);
    }
  } else {
    m.elements = get_array<float>(in, num_elements);
  }

  validate_tiled(m);
  return m;
}

TiledMatrix read_tiled_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_tiled_binary(in);
}

std::string serialize_tiled(const TiledMatrix& m) {
  std::ostringstream out(std::ios::binary);
  write_tiled_binary(m, out);
  return std::move(out).str();
}

}  // namespace tilemul
