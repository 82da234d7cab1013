#pragma once

#include <array>
#include <cstdint>

namespace sclaw::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32-10 block: a keyed bijection of 128-bit counters.
Counter philox4x32(Counter ctr, Key key);

/// Address of a single draw. A draw depends only on its address, never on
/// how many draws came before it.
struct DrawAddress {
  std::uint64_t seed;
  std::uint32_t stream;  // purpose of the draw (OU innovation, Wiener increment, ...)
  std::uint32_t index;   // mode or noise-family member
  std::uint64_t counter; // time step
};

/// Standard normal via Box-Muller on the 128 bits of one Philox block.
double normal(const DrawAddress& at);

/// Uniform on [0, 1) with 53 random bits.
double uniform(const DrawAddress& at);

namespace streams {
inline constexpr std::uint32_t ou_innovation = 0;
inline constexpr std::uint32_t wiener_increment = 1;
inline constexpr std::uint32_t dense_family = 2;
}  // namespace streams

}  // namespace sclaw::rng
