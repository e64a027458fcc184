#include "rlsw/random.hpp"

#include <cmath>
#include <numbers>

namespace rlsw {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

double standard_normal(std::uint64_t seed, std::uint32_t c0, std::uint32_t c1,
                       std::uint32_t c2, std::uint32_t c3) {
  const auto block =
      philox4x32({c0, c1, c2, c3}, {static_cast<std::uint32_t>(seed),
                                    static_cast<std::uint32_t>(seed >> 32)});
  const std::uint64_t a =
      (static_cast<std::uint64_t>(block[0]) << 21) ^ (block[1] >> 11);
  const std::uint64_t b =
      (static_cast<std::uint64_t>(block[2]) << 21) ^ (block[3] >> 11);
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  // u1 in (0, 1], u2 in [0, 1)
  const double u1 = (static_cast<double>(a & ((1ull << 53) - 1)) + 1.0) * kScale;
  const double u2 = static_cast<double>(b & ((1ull << 53) - 1)) * kScale;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(splitmix64(base) ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

}  // namespace rlsw
