#pragma once

// im2col lowering and GeMM-based 2D convolution over low-bit feature maps.
// H_k * W_k * C_in is capped at 32767 (16-bit accumulators).

#include <cstdint>
#include <vector>

#include "lowbit/core.hpp"
#include "lowbit/gemm.hpp"

namespace lowbit {

// Channel-last dense feature map of {-1, 0, +1} values.
struct FeatureMap {
    int height = 0;
    int width = 0;
    int channels = 0;
    Mode mode = Mode::ternary;
    std::vector<std::int8_t> values;

    FeatureMap() = default;
    FeatureMap(int h, int w, int c, Mode m)
        : height(h), width(w), channels(c), mode(m), values((size_t)h * w * c, 0) {}

    std::int8_t at(int y, int x, int c) const {
        return values[((size_t)y * width + x) * channels + c];
    }
    std::int8_t& at(int y, int x, int c) {
        return values[((size_t)y * width + x) * channels + c];
    }
};

struct ConvSpec {
    int kernel_h = 1;
    int kernel_w = 1;
    int stride = 1;
    int padding = 0;
    int out_channels = 1;
    // Value used for padded positions under binary activations (0 is not
    // representable there); ternary activations always pad with 0.
    int binary_pad_value = 1;
};

// Integer output feature map, channel-last.
struct IntFeatureMap {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<std::int32_t> values;

    std::int32_t at(int y, int x, int c) const {
        return values[((size_t)y * width + x) * channels + c];
    }
};

int conv_out_dim(int in, int kernel, int stride, int padding);

// One row per output pixel; columns ordered (ky, kx, channel).
SignMatrix im2col(const FeatureMap& fm, const ConvSpec& spec);

// weights: (kernel_h * kernel_w * C_in) x out_channels sign matrix in the
// same column order as im2col rows. Equals direct convolution exactly.
IntFeatureMap conv2d_lowbit(GemmMode mode, const FeatureMap& fm, const SignMatrix& weights,
                            const ConvSpec& spec);

}  // namespace lowbit
