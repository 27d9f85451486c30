// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "tilemul/errors.hpp"
#include "tilemul/half.hpp"

using namespace tilemul;

namespace {

// Every finite binary16 value, ascending, built straight from the bit
// definition: an enumeration oracle independent of round_to_half.
std::vector<double> all_finite_halves() {
  std::vector<double> values;
  for (int exp = 0; exp < 31; ++exp) {
    for (int man = 0; man < 1024; ++man) {
      double v;
      if (exp == 0) {
        v = man * std::ldexp(1.0, -24);
      } else {
        v = (1024 + man) * std::ldexp(1.0, exp - 25);
      }
      values.push_back(v);
    }
  }
  return values;
}

}  // namespace

TEST_SUITE("half") {
  TEST_CASE("exact values pass through") {
    CHECK(round_to_half(1.0) == 1.0);
    CHECK(round_to_half(0.0) == 0.0);
    CHECK(round_to_half(-2.5) == -2.5);
    CHECK(round_to_half(65504.0) == 65504.0);
  }

  TEST_CASE("2049 ties to even 2048") {
    CHECK(round_to_half(2049.0) == 2048.0);
    CHECK(round_to_half(-2049.0) == -2048.0);
    CHECK(round_to_half(2051.0) == 2052.0);  // tie the other way
  }

  TEST_CASE("out of range throws") {
    CHECK_THROWS_AS(round_to_half(70000.0), OverflowError);
    CHECK_THROWS_AS(round_to_half(-70000.0), OverflowError);
    CHECK_THROWS_AS(round_to_half(65504.5), OverflowError);
    CHECK_THROWS_AS(round_to_half(std::numeric_limits<double>::infinity()),
                    OverflowError);
    CHECK_THROWS_AS(round_to_half(std::nan("")), OverflowError);
  }

  TEST_CASE("subnormal boundaries") {
    const double sub_min = std::ldexp(1.0, -24);
    CHECK(round_to_half(sub_min) == sub_min);
    CHECK(round_to_half(std::ldexp(1.0, -25)) == 0.0);       // tie to even 0
    CHECK(round_to_half(std::ldexp(1.0, -25) * 1.5) == sub_min);
    CHECK(round_to_half(std::ldexp(3.0, -25)) == sub_min * 2);  // tie up
    // Underflow to zero keeps the operand's sign.
    CHECK(std::signbit(round_to_half(-std::ldexp(1.0, -25))));
    CHECK(std::signbit(round_to_half(-1.0e-12)));
    CHECK(!std::signbit(round_to_half(1.0e-12)));
    CHECK(std::signbit(round_to_half(-0.0)));
  }

  TEST_CASE("every finite half is a fixed point with exact neighbors") {
    const auto halves = all_finite_halves();
    for (std::size_t i = 0; i < halves.size(); ++i) {
      const double h = halves[i];
      CHECK(round_to_half(h) == h);
      CHECK(round_to_half(-h) == -h);
      if (i + 1 < halves.size()) {
        const double next = halves[i + 1];
        const double mid = (h + next) / 2.0;  // exact: same binade or edge
        // Ties go to the even mantissa; i even means h has even mantissa.
        const double expect_tie = (i % 2 == 0) ? h : next;
        CHECK(round_to_half(mid) == expect_tie);
        const double below = std::nextafter(mid, h);
        const double above = std::nextafter(mid, next);
        CHECK(round_to_half(below) == h);
        CHECK(round_to_half(above) == next);
      }
    }
  }

  TEST_CASE("idempotent on random doubles") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-65504.0, 65504.0);
    for (int i = 0; i < 20000; ++i) {
      const double x = dist(rng);
      const double once = round_to_half(x);
      CHECK(round_to_half(once) == once);
    }
  }

  TEST_CASE("bit encode/decode round trip") {
    const auto halves = all_finite_halves();
    for (const double h : halves) {
      const auto f = static_cast<float>(h);
      CHECK(half_bits_to_float(half_bits_from_float(f)) == f);
      const auto g = static_cast<float>(-h);
      CHECK(half_bits_to_float(half_bits_from_float(g)) == g);
    }
    CHECK_THROWS_AS(half_bits_from_float(0.1f), InvariantError);
    CHECK_THROWS_AS(half_bits_from_float(1.0e6f), InvariantError);
  }

  TEST_CASE("is_binary16") {
    CHECK(is_binary16(1.0f));
    CHECK(is_binary16(0.0f));
    CHECK(!is_binary16(0.1f));
    CHECK(!is_binary16(65536.0f));
    CHECK(!is_binary16(std::numeric_limits<float>::infinity()));
  }
}
