// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace tilemul {

// Largest finite IEEE 754 binary16 value.
inline constexpr double kHalfMax = 65504.0;

// Rounds x to the nearest IEEE 754 binary16 value (ties to even) and
// returns it as an exact double. Throws OverflowError when |x| > 65504
// or x is not finite. The rounding is done in a single step from the
// double operand, so results never suffer double rounding through float.
double round_to_half(double x);

// True when v is finite and exactly representable in binary16.
bool is_binary16(float v);

// Decodes a binary16 bit pattern. Infinity/NaN patterns decode to the
// corresponding float values (callers validate finiteness separately).
float half_bits_to_float(std::uint16_t bits);

// Encodes an exactly-representable float as binary16 bits. Throws
// InvariantError when v is not binary16-representable.
std::uint16_t half_bits_from_float(float v);

}  // namespace tilemul
