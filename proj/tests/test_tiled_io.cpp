// SPDX-License-Identifier: Apache-2.0
#include <random>
#include <sstream>

#include "doctest.h"
#include "support/corpus.hpp"
#include "tilemul/errors.hpp"
#include "tilemul/tile_format.hpp"
#include "tilemul/tiled_io.hpp"

using namespace tilemul;
using testsupport::make_random_coo;
using testsupport::ValueMode;

namespace {

TiledMatrix roundtrip(const TiledMatrix& m) {
  std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
  write_tiled_binary(m, ss);
  return read_tiled_binary(ss);
}

}  // namespace

TEST_SUITE("tiled_io") {
  TEST_CASE("round trip preserves the matrix") {
    std::mt19937_64 rng(17);
    for (const auto kind : {ElementKind::Fp16Stored, ElementKind::Fp32Stored}) {
      for (int rep = 0; rep < 5; ++rep) {
        const auto coo =
            make_random_coo(rng, 120, 96, 0.03, ValueMode::SignedHalves);
        const TiledMatrix m = from_element_coo(coo, kind);
        CHECK(roundtrip(m) == m);
      }
    }
    const TiledMatrix empty{.rows = 9, .cols = 7};
    CHECK(roundtrip(empty) == empty);
  }

  TEST_CASE("truncated file fails") {
    std::mt19937_64 rng(18);
    const TiledMatrix m = from_element_coo(
        make_random_coo(rng, 32, 32, 0.1, ValueMode::SignedHalves),
        ElementKind::Fp16Stored);
    const std::string bytes = serialize_tiled(m);
    for (const std::size_t keep :
         {std::size_t{2}, std::size_t{8}, std::size_t{20}, bytes.size() - 1}) {
      std::istringstream in(bytes.substr(0, keep), std::ios::binary);
      CHECK_THROWS_AS(read_tiled_binary(in), FormatError);
    }
  }

  TEST_CASE("bad magic and version fail") {
    std::istringstream junk("NOPE not a tiled file", std::ios::binary);
    CHECK_THROWS_AS(read_tiled_binary(junk), FormatError);

    TiledMatrix m{.rows = 8, .cols = 8};
    m.tiles.push_back({0, 0, 0, 1});
    m.elements = {1.0f};
    std::string bytes = serialize_tiled(m);
    bytes[4] = 9;  // version field
    std::istringstream in(bytes, std::ios::binary);
    CHECK_THROWS_AS(read_tiled_binary(in), FormatError);
  }

  TEST_CASE("unsorted tiles fail the invariant check") {
    TiledMatrix m{.rows = 16, .cols = 16};
    m.kind = ElementKind::Fp16Stored;
    m.tiles.push_back({0, 1, 0, 1});
    m.tiles.push_back({0, 0, 1, 1});
    m.elements = {1.0f, 2.0f};
    // write_tiled_binary does not sort for us; serialize the broken layout.
    std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
    write_tiled_binary(m, ss);
    CHECK_THROWS_AS(read_tiled_binary(ss), InvariantError);
  }

  TEST_CASE("non-finite fp16 payload fails") {
    TiledMatrix m{.rows = 8, .cols = 8};
    m.tiles.push_back({0, 0, 0, 1});
    m.elements = {1.0f};
    std::string bytes = serialize_tiled(m);
    // Element payload is the last u16; 0x7C00 encodes infinity.
    bytes[bytes.size() - 2] = 0x00;
    bytes[bytes.size() - 1] = 0x7C;
    std::istringstream in(bytes, std::ios::binary);
    CHECK_THROWS_AS(read_tiled_binary(in), InvariantError);
  }
}
