#pragma once

// Microkernel-ready block layouts. The kernel tile is 16 (A rows) x 8 (B cols)
// and consumes whole depth bytes; blocks are stored depth-byte-major.
//
//   bnn-A, per depth byte d:  byte d of rows 0..15            (16 bytes)
//   bnn-B, per depth byte d:  byte d of cols 0..7             ( 8 bytes)
//   tnn-A, per depth byte d:  A+ rows 0..7 | A- rows 0..7 |
//                             A+ rows 8..15 | A- rows 8..15   (32 bytes)
//   tnn-B, per depth byte d:  col0+ col0- col1+ col1- ... col7-  (16 bytes)
//
// Row/column remainders are padded with neutral lanes (binary: +1, ternary: 0)
// and a partial final depth byte is zero-masked, so kernels never special-case.

#include <cstdint>
#include <vector>

#include "lowbit/core.hpp"

namespace lowbit {

enum class BlockMode { bnn_a, bnn_b, tnn_a, tnn_b };

struct PackedBlock {
    BlockMode mode = BlockMode::bnn_a;
    int lanes = 0;        // logical rows (A) or cols (B) covered, <= 16 / 8
    int depth_bytes = 0;  // ceil(k_eff / 8)
    std::vector<std::uint8_t> buffer;
};

// Bytes per depth byte for a block mode (16, 8, 32 or 16).
int block_group_bytes(BlockMode mode);

PackedBlock pack_a_binary(const BinaryPackedMatrix& a, int row_start, int depth_start, int k_eff);
PackedBlock pack_b_binary(const BinaryPackedMatrix& b, int col_start, int depth_start, int k_eff);
PackedBlock pack_a_ternary(const TernaryPackedMatrix& a, int row_start, int depth_start, int k_eff);
PackedBlock pack_b_ternary(const TernaryPackedMatrix& b, int col_start, int depth_start, int k_eff);

}  // namespace lowbit
