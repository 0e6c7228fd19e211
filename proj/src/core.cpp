#include "lowbit/core.hpp"

#include <cmath>

namespace lowbit {

namespace {

int stride_for(int cols) { return (cols + 7) & ~7; }

}  // namespace

BinaryPackedMatrix encode_binary(const SignMatrix& values) {
    BinaryPackedMatrix out;
    out.rows = values.rows;
    out.cols = values.cols;
    out.stride_bits = stride_for(values.cols);
    out.plane.assign((size_t)out.rows * out.stride_bytes(), 0);
    for (int r = 0; r < values.rows; ++r) {
        std::uint8_t* dst = out.plane.data() + (size_t)r * out.stride_bytes();
        for (int c = 0; c < values.cols; ++c) {
            std::int8_t v = values.at(r, c);
            if (v == 0) throw ZeroInBinaryInput();
            if (v < 0) dst[c >> 3] |= (std::uint8_t)(1u << (c & 7));
        }
    }
    return out;
}

SignMatrix decode_binary(const BinaryPackedMatrix& m) {
    SignMatrix out(m.rows, m.cols, Mode::binary);
    for (int r = 0; r < m.rows; ++r) {
        const std::uint8_t* src = m.row(r);
        for (int c = 0; c < m.cols; ++c)
            out.at(r, c) = (src[c >> 3] >> (c & 7)) & 1 ? -1 : 1;
    }
    return out;
}

TernaryPackedMatrix encode_ternary(const SignMatrix& values) {
    TernaryPackedMatrix out;
    out.rows = values.rows;
    out.cols = values.cols;
    out.stride_bits = stride_for(values.cols);
    size_t bytes = (size_t)out.rows * out.stride_bytes();
    out.plane_plus.assign(bytes, 0);
    out.plane_minus.assign(bytes, 0);
    for (int r = 0; r < values.rows; ++r) {
        size_t base = (size_t)r * out.stride_bytes();
        for (int c = 0; c < values.cols; ++c) {
            std::int8_t v = values.at(r, c);
            std::uint8_t bit = (std::uint8_t)(1u << (c & 7));
            if (v > 0) out.plane_plus[base + (c >> 3)] |= bit;
            if (v < 0) out.plane_minus[base + (c >> 3)] |= bit;
        }
    }
    return out;
}

SignMatrix decode_ternary(const TernaryPackedMatrix& m) {
    SignMatrix out(m.rows, m.cols, Mode::ternary);
    for (int r = 0; r < m.rows; ++r) {
        const std::uint8_t* p = m.row_plus(r);
        const std::uint8_t* n = m.row_minus(r);
        for (int c = 0; c < m.cols; ++c) {
            int bit = 1 << (c & 7);
            out.at(r, c) = (std::int8_t)(((p[c >> 3] & bit) ? 1 : 0) - ((n[c >> 3] & bit) ? 1 : 0));
        }
    }
    return out;
}

TernaryCode ternary_mul(TernaryCode x, TernaryCode y) {
    if ((x.plus && x.minus) || (y.plus && y.minus)) throw InvalidCode();
    return {(x.plus && y.plus) || (x.minus && y.minus),
            (x.plus && y.minus) || (x.minus && y.plus)};
}

TernaryCode ternary_binary_mul(TernaryCode x, bool y_bit) {
    if (x.plus && x.minus) throw InvalidCode();
    return {(x.plus || y_bit) && (x.minus || !y_bit),
            (x.plus || !y_bit) && (x.minus || y_bit)};
}

int quantize(float x, const QuantParams& q) {
    // round-half-up, then clamp to [0, Q]
    long v = (long)std::floor((double)x / q.scale + 0.5) + q.zero_point;
    if (v < 0) return 0;
    if (v > q.qmax()) return q.qmax();
    return (int)v;
}

float dequantize(int x_hat, const QuantParams& q) { return q.scale * (float)(x_hat - q.zero_point); }

}  // namespace lowbit
