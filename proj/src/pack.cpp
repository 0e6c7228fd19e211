#include "lowbit/pack.hpp"

namespace lowbit {

namespace {

void check_depth(int cols, int depth_start, int k_eff) {
    if (depth_start < 0 || (depth_start & 7) != 0)
        throw OutOfBounds("depth_start must be a non-negative multiple of 8");
    if (k_eff < 1 || depth_start + k_eff > cols) throw OutOfBounds("depth range");
}

// Mask for bits past k_eff in depth byte d (partial final byte reads as 0).
std::uint8_t tail_mask(int k_eff, int d) {
    int rem = k_eff - d * 8;
    if (rem >= 8) return 0xFF;
    return (std::uint8_t)((1u << rem) - 1);
}

// Extract the byte covering depths [t0, t0+8) of column c from a row-major
// bit plane with `rows` depth rows. Out-of-range positions read as 0.
std::uint8_t gather_col_byte(const std::vector<std::uint8_t>& plane, int stride_bytes, int rows,
                             int cols, int t0, int c) {
    if (c >= cols) return 0;
    std::uint8_t out = 0;
    int lim = rows - t0 < 8 ? rows - t0 : 8;
    for (int j = 0; j < lim; ++j) {
        const std::uint8_t* row = plane.data() + (size_t)(t0 + j) * stride_bytes;
        out |= (std::uint8_t)(((row[c >> 3] >> (c & 7)) & 1u) << j);
    }
    return out;
}

}  // namespace

int block_group_bytes(BlockMode mode) {
    switch (mode) {
        case BlockMode::bnn_a: return 16;
        case BlockMode::bnn_b: return 8;
        case BlockMode::tnn_a: return 32;
        case BlockMode::tnn_b: return 16;
    }
    return 0;
}

PackedBlock pack_a_binary(const BinaryPackedMatrix& a, int row_start, int depth_start, int k_eff) {
    check_depth(a.cols, depth_start, k_eff);
    if (row_start < 0 || row_start >= a.rows) throw OutOfBounds("row_start");
    PackedBlock blk;
    blk.mode = BlockMode::bnn_a;
    blk.lanes = a.rows - row_start < 16 ? a.rows - row_start : 16;
    blk.depth_bytes = (k_eff + 7) / 8;
    blk.buffer.assign((size_t)16 * blk.depth_bytes, 0);
    int db0 = depth_start / 8;
    for (int d = 0; d < blk.depth_bytes; ++d) {
        std::uint8_t mask = tail_mask(k_eff, d);
        std::uint8_t* dst = blk.buffer.data() + (size_t)d * 16;
        for (int i = 0; i < blk.lanes; ++i)
            dst[i] = (std::uint8_t)(a.row(row_start + i)[db0 + d] & mask);
    }
    return blk;
}

PackedBlock pack_b_binary(const BinaryPackedMatrix& b, int col_start, int depth_start, int k_eff) {
    check_depth(b.rows, depth_start, k_eff);
    if (col_start < 0 || col_start >= b.cols) throw OutOfBounds("col_start");
    PackedBlock blk;
    blk.mode = BlockMode::bnn_b;
    blk.lanes = b.cols - col_start < 8 ? b.cols - col_start : 8;
    blk.depth_bytes = (k_eff + 7) / 8;
    blk.buffer.assign((size_t)8 * blk.depth_bytes, 0);
    for (int d = 0; d < blk.depth_bytes; ++d) {
        int t0 = depth_start + d * 8;
        int rows_lim = depth_start + k_eff;
        std::uint8_t* dst = blk.buffer.data() + (size_t)d * 8;
        for (int j = 0; j < blk.lanes; ++j)
            dst[j] = gather_col_byte(b.plane, b.stride_bytes(), rows_lim, b.cols, t0,
                                     col_start + j);
    }
    return blk;
}

PackedBlock pack_a_ternary(const TernaryPackedMatrix& a, int row_start, int depth_start,
                           int k_eff) {
    check_depth(a.cols, depth_start, k_eff);
    if (row_start < 0 || row_start >= a.rows) throw OutOfBounds("row_start");
    PackedBlock blk;
    blk.mode = BlockMode::tnn_a;
    blk.lanes = a.rows - row_start < 16 ? a.rows - row_start : 16;
    blk.depth_bytes = (k_eff + 7) / 8;
    blk.buffer.assign((size_t)32 * blk.depth_bytes, 0);
    int db0 = depth_start / 8;
    for (int d = 0; d < blk.depth_bytes; ++d) {
        std::uint8_t mask = tail_mask(k_eff, d);
        std::uint8_t* dst = blk.buffer.data() + (size_t)d * 32;
        // [A+ rows 0..7][A- rows 0..7][A+ rows 8..15][A- rows 8..15]
        for (int i = 0; i < blk.lanes; ++i) {
            int half = i / 8, sub = i % 8;
            dst[half * 16 + sub] = (std::uint8_t)(a.row_plus(row_start + i)[db0 + d] & mask);
            dst[half * 16 + 8 + sub] = (std::uint8_t)(a.row_minus(row_start + i)[db0 + d] & mask);
        }
    }
    return blk;
}

PackedBlock pack_b_ternary(const TernaryPackedMatrix& b, int col_start, int depth_start,
                           int k_eff) {
    check_depth(b.rows, depth_start, k_eff);
    if (col_start < 0 || col_start >= b.cols) throw OutOfBounds("col_start");
    PackedBlock blk;
    blk.mode = BlockMode::tnn_b;
    blk.lanes = b.cols - col_start < 8 ? b.cols - col_start : 8;
    blk.depth_bytes = (k_eff + 7) / 8;
    blk.buffer.assign((size_t)16 * blk.depth_bytes, 0);
    for (int d = 0; d < blk.depth_bytes; ++d) {
        int t0 = depth_start + d * 8;
        int rows_lim = depth_start + k_eff;
        std::uint8_t* dst = blk.buffer.data() + (size_t)d * 16;
        for (int j = 0; j < blk.lanes; ++j) {
            dst[j * 2] = gather_col_byte(b.plane_plus, b.stride_bytes(), rows_lim, b.cols, t0,
                                         col_start + j);
            dst[j * 2 + 1] = gather_col_byte(b.plane_minus, b.stride_bytes(), rows_lim, b.cols, t0,
                                             col_start + j);
        }
    }
    return blk;
}

}  // namespace lowbit
