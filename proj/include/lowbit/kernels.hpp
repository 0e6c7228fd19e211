#pragma once

// 16x8 tile microkernels over packed blocks. All arithmetic is Boolean
// logic + popcount + 16-bit accumulation:
//
//   binary:         c += k_eff - 2 * sum(popcount(a ^ b))
//   ternary:        z+ = (a+ & b+) | (a- & b-),  z- = (a+ & b-) | (a- & b+)
//   ternary-binary: z+ = (a+ | b) & (a- | ~b),   z- = (a+ | ~b) & (a- | b)
//                   c += sum(popcount(z+)) - sum(popcount(z-))
//
// Blocks may be consumed in depth slices; entries stay within +-k_logical,
// and the total logical depth per output must not exceed 32767.

#include <array>
#include <cstdint>
#include <span>

#include "lowbit/pack.hpp"

namespace lowbit {

inline constexpr int kTileRows = 16;
inline constexpr int kTileCols = 8;
inline constexpr int kMaxDepth16 = 32767;  // 2^15 - 1, signed 16-bit accumulators

struct AccumulatorTile {
    std::array<std::int16_t, kTileRows * kTileCols> c{};

    std::int16_t& at(int i, int j) { return c[i * kTileCols + j]; }
    std::int16_t at(int i, int j) const { return c[i * kTileCols + j]; }
};

// +-1 dot product of two byte-padded bit sequences: k - 2*popcount(a ^ b).
std::int16_t dot_binary(std::span<const std::uint8_t> a_bits, std::span<const std::uint8_t> b_bits,
                        int k_logical);

void microkernel_bnn(const PackedBlock& a_block, const PackedBlock& b_block, int k_eff,
                     AccumulatorTile& acc);
void microkernel_tnn(const PackedBlock& a_block, const PackedBlock& b_block, int k_eff,
                     AccumulatorTile& acc);
void microkernel_tbn(const PackedBlock& a_block, const PackedBlock& b_block, int k_eff,
                     AccumulatorTile& acc);

namespace detail {
// Raw-pointer variants used by the gemm driver to address a depth slice of a
// full-depth packed buffer. depth_bytes = ceil(k_eff / 8); the buffers hold
// depth_bytes groups in the corresponding block layout.
void bnn_tile(const std::uint8_t* a, const std::uint8_t* b, int depth_bytes, int k_eff,
              AccumulatorTile& acc);
void tnn_tile(const std::uint8_t* a, const std::uint8_t* b, int depth_bytes, AccumulatorTile& acc);
void tbn_tile(const std::uint8_t* a, const std::uint8_t* b, int depth_bytes, AccumulatorTile& acc);
}  // namespace detail

}  // namespace lowbit
