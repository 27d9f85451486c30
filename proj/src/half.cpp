// SPDX-License-Identifier: Apache-2.0
#include "tilemul/half.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tilemul/errors.hpp"

namespace tilemul {

double round_to_half(double x) {
  if (!std::isfinite(x) || std::fabs(x) > kHalfMax) {
    throw OverflowError("value " + std::to_string(x) +
                        " outside binary16 finite range (|x| <= 65504)");
  }
  if (x == 0.0) return x;

  int exp2 = 0;
  std::frexp(std::fabs(x), &exp2);
  const int e = exp2 - 1;  // floor(log2 |x|)

  // Normals (e >= -14) have quantum 2^(e-10); subnormals bottom out at 2^-24.
  const int quantum_exp = (e >= -14) ? e - 10 : -24;
  const double quantum = std::ldexp(1.0, quantum_exp);

  // |x| <= 65504 and quantum >= 2^-24, so y fits in 2^41: the scaling,
  // the floor difference and the final product are all exact.
  const double y = x / quantum;
  const double f = std::floor(y);
  const double r = y - f;
  double rounded = f;
  if (r > 0.5 || (r == 0.5 && std::fmod(f, 2.0) != 0.0)) rounded = f + 1.0;
  if (rounded == 0.0) return std::copysign(0.0, x);  // keep the zero's sign
  return rounded * quantum;
}

bool is_binary16(float v) {
  if (!std::isfinite(v) || std::fabs(v) > kHalfMax) return false;
  return round_to_half(static_cast<double>(v)) == static_cast<double>(v);
}

float half_bits_to_float(std::uint16_t bits) {
  const bool negative = (bits & 0x8000u) != 0;
  const int exp = (bits >> 10) & 0x1F;
  const int mantissa = bits & 0x3FF;
  float v;
  if (exp == 31) {
    v = mantissa ? std::numeric_limits<float>::quiet_NaN()
                 : std::numeric_limits<float>::infinity();
  } else if (exp == 0) {
    v = std::ldexp(static_cast<float>(mantissa), -24);
  } else {
    v = std::ldexp(static_cast<float>(1024 + mantissa), exp - 25);
  }
  return negative ? -v : v;
}

std::uint16_t half_bits_from_float(float v) {
  if (!is_binary16(v)) {
    throw InvariantError("value " + std::to_string(v) +
                         " is not binary16-representable");
  }
  const std::uint16_t sign = std::signbit(v) ? 0x8000u : 0u;
  const double a = std::fabs(static_cast<double>(v));
  if (a == 0.0) return sign;

  int exp2 = 0;
  std::frexp(a, &exp2);
  const int e = exp2 - 1;
  if (e < -14) {
    // Subnormal: mantissa counts units of 2^-24.
    const auto mantissa = static_cast<std::uint16_t>(std::ldexp(a, 24));
    return static_cast<std::uint16_t>(sign | mantissa);
  }
  const auto mantissa =
      static_cast<std::uint16_t>(std::ldexp(a, 10 - e) - 1024.0);
  return static_cast<std::uint16_t>(sign | ((e + 15) << 10) | mantissa);
}

}  // namespace tilemul
