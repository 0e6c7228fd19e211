#include "lowbit/kernels.hpp"

#include <bit>
#include <vector>

namespace lowbit {

std::int16_t dot_binary(std::span<const std::uint8_t> a_bits, std::span<const std::uint8_t> b_bits,
                        int k_logical) {
    if (k_logical > kMaxDepth16) throw DepthOverflow(k_logical, kMaxDepth16);
    size_t n = a_bits.size() < b_bits.size() ? a_bits.size() : b_bits.size();
    int pc = 0;
    for (size_t i = 0; i < n; ++i)
        pc += std::popcount((std::uint8_t)(a_bits[i] ^ b_bits[i]));
    return (std::int16_t)(k_logical - 2 * pc);
}

namespace detail {

namespace {

// Scratch for depth-major -> lane-major word transposition.
thread_local std::vector<std::uint64_t> g_scratch;

inline void put_byte(std::uint64_t* lane, int d, std::uint8_t v) {
    lane[d >> 3] |= (std::uint64_t)v << ((d & 7) * 8);
}

}  // namespace

void bnn_tile(const std::uint8_t* a, const std::uint8_t* b, int depth_bytes, int k_eff,
              AccumulatorTile& acc) {
    int nw = (depth_bytes + 7) / 8;
    g_scratch.assign((size_t)24 * nw, 0);
    std::uint64_t* ar = g_scratch.data();
    std::uint64_t* bc = ar + 16 * (size_t)nw;
    for (int d = 0; d < depth_bytes; ++d) {
        const std::uint8_t* ga = a + (size_t)d * 16;
        const std::uint8_t* gb = b + (size_t)d * 8;
        for (int i = 0; i < 16; ++i) put_byte(ar + (size_t)i * nw, d, ga[i]);
        for (int j = 0; j < 8; ++j) put_byte(bc + (size_t)j * nw, d, gb[j]);
    }
    for (int i = 0; i < 16; ++i) {
        const std::uint64_t* ai = ar + (size_t)i * nw;
        for (int j = 0; j < 8; ++j) {
            const std::uint64_t* bj = bc + (size_t)j * nw;
            int pc = 0;
            for (int w = 0; w < nw; ++w) pc += std::popcount(ai[w] ^ bj[w]);
            acc.at(i, j) = (std::int16_t)(acc.at(i, j) + k_eff - 2 * pc);
        }
    }
}

void tnn_tile(const std::uint8_t* a, const std::uint8_t* b, int depth_bytes,
              AccumulatorTile& acc) {
    int nw = (depth_bytes + 7) / 8;
    g_scratch.assign((size_t)48 * nw, 0);
    std::uint64_t* ap = g_scratch.data();
    std::uint64_t* am = ap + 16 * (size_t)nw;
    std::uint64_t* bp = am + 16 * (size_t)nw;
    std::uint64_t* bm = bp + 8 * (size_t)nw;
    for (int d = 0; d < depth_bytes; ++d) {
        const std::uint8_t* ga = a + (size_t)d * 32;
        const std::uint8_t* gb = b + (size_t)d * 16;
        for (int i = 0; i < 16; ++i) {
            int half = i >> 3, sub = i & 7;
            put_byte(ap + (size_t)i * nw, d, ga[half * 16 + sub]);
            put_byte(am + (size_t)i * nw, d, ga[half * 16 + 8 + sub]);
        }
        for (int j = 0; j < 8; ++j) {
            put_byte(bp + (size_t)j * nw, d, gb[j * 2]);
            put_byte(bm + (size_t)j * nw, d, gb[j * 2 + 1]);
        }
    }
    for (int i = 0; i < 16; ++i) {
        const std::uint64_t* api = ap + (size_t)i * nw;
        const std::uint64_t* ami = am + (size_t)i * nw;
        for (int j = 0; j < 8; ++j) {
            const std::uint64_t* bpj = bp + (size_t)j * nw;
            const std::uint64_t* bmj = bm + (size_t)j * nw;
            int s = 0;
            for (int w = 0; w < nw; ++w) {
                std::uint64_t zp = (api[w] & bpj[w]) | (ami[w] & bmj[w]);
                std::uint64_t zm = (api[w] & bmj[w]) | (ami[w] & bpj[w]);
                s += std::popcount(zp) - std::popcount(zm);
            }
            acc.at(i, j) = (std::int16_t)(acc.at(i, j) + s);
        }
    }
}

void tbn_tile(const std::uint8_t* a, const std::uint8_t* b, int depth_bytes,
              AccumulatorTile& acc) {
    int nw = (depth_bytes + 7) / 8;
    g_scratch.assign((size_t)40 * nw, 0);
    std::uint64_t* ap = g_scratch.data();
    std::uint64_t* am = ap + 16 * (size_t)nw;
    std::uint64_t* bc = am + 16 * (size_t)nw;
    for (int d = 0; d < depth_bytes; ++d) {
        const std::uint8_t* ga = a + (size_t)d * 32;
        const std::uint8_t* gb = b + (size_t)d * 8;
        for (int i = 0; i < 16; ++i) {
            int half = i >> 3, sub = i & 7;
            put_byte(ap + (size_t)i * nw, d, ga[half * 16 + sub]);
            put_byte(am + (size_t)i * nw, d, ga[half * 16 + 8 + sub]);
        }
        for (int j = 0; j < 8; ++j) put_byte(bc + (size_t)j * nw, d, gb[j]);
    }
    for (int i = 0; i < 16; ++i) {
        const std::uint64_t* api = ap + (size_t)i * nw;
        const std::uint64_t* ami = am + (size_t)i * nw;
        // plus and minus planes of the product partition the nonzeros of a,
        // so s = 2*popcount(z+) - popcount(a+ | a-); the latter hoists out
        int nnz = 0;
        for (int w = 0; w < nw; ++w) nnz += std::popcount(api[w] | ami[w]);
        for (int j = 0; j < 8; ++j) {
            const std::uint64_t* bj = bc + (size_t)j * nw;
            int plus = 0;
            for (int w = 0; w < nw; ++w) {
                std::uint64_t zp = (api[w] & ~bj[w]) | (ami[w] & bj[w]);
                plus += std::popcount(zp);
            }
            acc.at(i, j) = (std::int16_t)(acc.at(i, j) + 2 * plus - nnz);
        }
    }
}

}  // namespace detail

namespace {

void check_blocks(const PackedBlock& a, BlockMode want_a, const PackedBlock& b, BlockMode want_b,
                  int k_eff) {
    if (a.mode != want_a || b.mode != want_b) throw ModeMismatch("packed block mode");
    if (k_eff > kMaxDepth16) throw DepthOverflow(k_eff, kMaxDepth16);
    int db = (k_eff + 7) / 8;
    if (db > a.depth_bytes || db > b.depth_bytes) throw OutOfBounds("k_eff exceeds packed depth");
}

}  // namespace

void microkernel_bnn(const PackedBlock& a_block, const PackedBlock& b_block, int k_eff,
                     AccumulatorTile& acc) {
    check_blocks(a_block, BlockMode::bnn_a, b_block, BlockMode::bnn_b, k_eff);
    detail::bnn_tile(a_block.buffer.data(), b_block.buffer.data(), (k_eff + 7) / 8, k_eff, acc);
}

void microkernel_tnn(const PackedBlock& a_block, const PackedBlock& b_block, int k_eff,
                     AccumulatorTile& acc) {
    check_blocks(a_block, BlockMode::tnn_a, b_block, BlockMode::tnn_b, k_eff);
    detail::tnn_tile(a_block.buffer.data(), b_block.buffer.data(), (k_eff + 7) / 8, acc);
}

void microkernel_tbn(const PackedBlock& a_block, const PackedBlock& b_block, int k_eff,
                     AccumulatorTile& acc) {
    check_blocks(a_block, BlockMode::tnn_a, b_block, BlockMode::bnn_b, k_eff);
    detail::tbn_tile(a_block.buffer.data(), b_block.buffer.data(), (k_eff + 7) / 8, acc);
}

}  // namespace lowbit
