#pragma once

#include <cstdint>

namespace oobleck::visc {

// `int` is a 64-bit unsigned word: arithmetic wraps, right shift is logical,
// and shifting by 64 or more yields zero.

constexpr std::uint64_t word_shl(std::uint64_t a, std::uint64_t b) { return b >= 64 ? 0 : a << b; }
constexpr std::uint64_t word_shr(std::uint64_t a, std::uint64_t b) { return b >= 64 ? 0 : a >> b; }
constexpr std::uint64_t word_neg(std::uint64_t a) { return 0 - a; }

}  // namespace oobleck::visc
