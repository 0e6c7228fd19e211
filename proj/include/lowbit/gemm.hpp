#pragma once

// Blocked GeMM drivers for the low-bit modes plus floating-point and
// zero-point-quantized integer baselines, overflow-limit calculators and the
// scalar reference oracle.
//
// Loop structure (B pre-packed once, whole depth):
//
//   for d in [0, k) step k_blk:          depth slice
//     for r in [0, m) step 16:           pack Ablock for this slice
//       for c in [0, n) step 8:          microkernel + masked writeback
//
// Low-bit results are signed 16-bit; total depth is limited to 32767.

#include <cstdint>
#include <vector>

#include "lowbit/core.hpp"
#include "lowbit/kernels.hpp"
#include "lowbit/pack.hpp"

namespace lowbit {

enum class GemmMode { bnn, tnn, tbn };

struct GemmDims {
    int m = 0;
    int n = 0;
    int k = 0;
};

struct GemmConfig {
    int k_blk = 4096;  // logical depth per slice, multiple of 8
    static constexpr int m_mk = kTileRows;
    static constexpr int n_mk = kTileCols;
    static constexpr int accumulator_bits = 16;
};

struct Int16Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::int16_t> values;

    std::int16_t at(int r, int c) const { return values[(size_t)r * cols + c]; }
};

struct Int32Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::int32_t> values;

    std::int32_t at(int r, int c) const { return values[(size_t)r * cols + c]; }
    std::int32_t& at(int r, int c) { return values[(size_t)r * cols + c]; }
};

struct FloatMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<float> values;

    FloatMatrix() = default;
    FloatMatrix(int r, int c) : rows(r), cols(c), values((size_t)r * c, 0.0f) {}
    float at(int r, int c) const { return values[(size_t)r * cols + c]; }
    float& at(int r, int c) { return values[(size_t)r * cols + c]; }
};

// Right matrix packed once for the whole depth, one block per 8-column group.
struct PackedB {
    BlockMode mode = BlockMode::bnn_b;
    int n = 0;
    int k = 0;
    std::vector<PackedBlock> panels;
};

PackedB pack_b(const BinaryPackedMatrix& b);
PackedB pack_b(const TernaryPackedMatrix& b);

Int16Matrix gemm_lowbit(GemmMode mode, const BinaryPackedMatrix& a, const PackedB& packed_b,
                        const GemmDims& dims, const GemmConfig& cfg = {});
Int16Matrix gemm_lowbit(GemmMode mode, const TernaryPackedMatrix& a, const PackedB& packed_b,
                        const GemmDims& dims, const GemmConfig& cfg = {});

FloatMatrix gemm_f32(const FloatMatrix& a, const FloatMatrix& b, const GemmConfig& cfg = {});

// Zero-point-quantized integer GeMM inputs: p-bit unsigned entries plus the
// precomputed row sums of A-hat and column sums of B-hat.
struct QuantizedGemmInputs {
    Int32Matrix a_hat;  // entries in [0, Q_A]
    Int32Matrix b_hat;
    QuantParams qa;
    QuantParams qb;
    std::vector<std::int64_t> a_row_sums;
    std::vector<std::int64_t> b_col_sums;
};

QuantizedGemmInputs make_quantized_inputs(Int32Matrix a_hat, Int32Matrix b_hat, QuantParams qa,
                                          QuantParams qb);

struct QuantizedGemmResult {
    Int32Matrix c_tilde;
    float scale = 1.0f;  // s_A * s_B; C ~= scale * c_tilde
};

QuantizedGemmResult gemm_quantized(const QuantizedGemmInputs& inputs, const GemmDims& dims);

// Maximum overflow-free depth for p-bit unsigned operands in a q-bit
// unsigned accumulator: floor((2^q - 1) / (2^p - 1)^2).
std::int64_t k_max(int p, int q);

// Sign-valued modes (|product| <= 1) with a signed q-bit accumulator.
std::int64_t k_max_sign(int q);

// Maximum input channels for an Hk x Wk convolution kernel.
std::int64_t c_in_max(std::int64_t k_max, int kernel_h, int kernel_w);

// Naive triple-loop oracle over decoded values.
Int32Matrix reference_gemm_int(const SignMatrix& a, const SignMatrix& b);

}  // namespace lowbit
