#pragma once

// Value representations and bit encodings for binary/ternary matrices.
//
// Binary {+1,-1} values use one bit per element:    +1 -> 0, -1 -> 1.
// Ternary {+1,0,-1} values use two bit planes:      +1 -> (plus=1, minus=0),
//                                                    0 -> (0,0), -1 -> (0,1).
// Code (1,1) is invalid. Bits are packed LSB-first: bit j of a byte holds
// depth offset j. Rows are padded to a whole number of bytes; padding bits
// are always 0 (value +1 for binary planes, value 0 for ternary planes).

#include <cstdint>
#include <vector>

#include "lowbit/errors.hpp"

namespace lowbit {

enum class Mode { binary, ternary };

// Dense row-major matrix of {-1, 0, +1} values. binary mode forbids 0.
struct SignMatrix {
    int rows = 0;
    int cols = 0;
    Mode mode = Mode::ternary;
    std::vector<std::int8_t> values;

    SignMatrix() = default;
    SignMatrix(int r, int c, Mode m) : rows(r), cols(c), mode(m), values((size_t)r * c, 0) {}

    std::int8_t at(int r, int c) const { return values[(size_t)r * cols + c]; }
    std::int8_t& at(int r, int c) { return values[(size_t)r * cols + c]; }
};

// One bit plane, row-major, stride padded to whole bytes.
struct BinaryPackedMatrix {
    int rows = 0;
    int cols = 0;         // logical columns
    int stride_bits = 0;  // cols rounded up to a multiple of 8
    std::vector<std::uint8_t> plane;

    int stride_bytes() const { return stride_bits / 8; }
    const std::uint8_t* row(int r) const { return plane.data() + (size_t)r * stride_bytes(); }
};

// Two bit planes (plus, minus); their AND is all-zero.
struct TernaryPackedMatrix {
    int rows = 0;
    int cols = 0;
    int stride_bits = 0;
    std::vector<std::uint8_t> plane_plus;
    std::vector<std::uint8_t> plane_minus;

    int stride_bytes() const { return stride_bits / 8; }
    const std::uint8_t* row_plus(int r) const {
        return plane_plus.data() + (size_t)r * stride_bytes();
    }
    const std::uint8_t* row_minus(int r) const {
        return plane_minus.data() + (size_t)r * stride_bytes();
    }
};

BinaryPackedMatrix encode_binary(const SignMatrix& values);
SignMatrix decode_binary(const BinaryPackedMatrix& m);

TernaryPackedMatrix encode_ternary(const SignMatrix& values);
SignMatrix decode_ternary(const TernaryPackedMatrix& m);

// Two-bit ternary code. (plus,minus) = (1,1) is invalid.
struct TernaryCode {
    bool plus = false;
    bool minus = false;

    int decoded() const { return (plus ? 1 : 0) - (minus ? 1 : 0); }
    bool operator==(const TernaryCode&) const = default;
};

// Ternary x ternary product on codes. Throws InvalidCode on (1,1) input.
TernaryCode ternary_mul(TernaryCode x, TernaryCode y);

// Ternary x binary product; y_bit is the single-bit encoding of y (+1 -> 0).
TernaryCode ternary_binary_mul(TernaryCode x, bool y_bit);

// Linear quantization parameters: x_hat = clamp(round(x / scale) + zero_point, 0, Q).
struct QuantParams {
    float scale = 1.0f;
    int zero_point = 0;
    int bits = 8;

    int qmax() const { return (1 << bits) - 1; }
};

int quantize(float x, const QuantParams& q);
float dequantize(int x_hat, const QuantParams& q);

}  // namespace lowbit
