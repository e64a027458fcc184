#pragma once

#include <array>
#include <cstdint>

namespace rlsw {

/// Philox4x32-10 block function (Salmon et al.).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Standard normal draw addressed by a counter. Box-Muller on two 53-bit
/// uniforms taken from one Philox block, cosine branch only.
double standard_normal(std::uint64_t seed, std::uint32_t c0, std::uint32_t c1,
                       std::uint32_t c2, std::uint32_t c3);

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for run `index` of an experiment seeded with `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace rlsw
