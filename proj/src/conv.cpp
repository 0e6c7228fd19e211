#include "lowbit/conv.hpp"

namespace lowbit {

int conv_out_dim(int in, int kernel, int stride, int padding) {
    return (in + 2 * padding - kernel) / stride + 1;
}

SignMatrix im2col(const FeatureMap& fm, const ConvSpec& spec) {
    int out_h = conv_out_dim(fm.height, spec.kernel_h, spec.stride, spec.padding);
    int out_w = conv_out_dim(fm.width, spec.kernel_w, spec.stride, spec.padding);
    if (out_h < 1 || out_w < 1) throw EmptyOutput();
    std::int8_t pad = fm.mode == Mode::binary ? (std::int8_t)spec.binary_pad_value : (std::int8_t)0;
    SignMatrix out(out_h * out_w, spec.kernel_h * spec.kernel_w * fm.channels, fm.mode);
    for (int oy = 0; oy < out_h; ++oy) {
        for (int ox = 0; ox < out_w; ++ox) {
            int row = oy * out_w + ox;
            int col = 0;
            for (int ky = 0; ky < spec.kernel_h; ++ky) {
                int y = oy * spec.stride + ky - spec.padding;
                for (int kx = 0; kx < spec.kernel_w; ++kx) {
                    int x = ox * spec.stride + kx - spec.padding;
                    bool inside = y >= 0 && y < fm.height && x >= 0 && x < fm.width;
                    for (int c = 0; c < fm.channels; ++c, ++col)
                        out.at(row, col) = inside ? fm.at(y, x, c) : pad;
                }
            }
        }
    }
    return out;
}

IntFeatureMap conv2d_lowbit(GemmMode mode, const FeatureMap& fm, const SignMatrix& weights,
                            const ConvSpec& spec) {
    int k = spec.kernel_h * spec.kernel_w * fm.channels;
    if (k > kMaxDepth16)
        throw ChannelOverflow(fm.channels, c_in_max(kMaxDepth16, spec.kernel_h, spec.kernel_w));
    if (weights.rows != k || weights.cols != spec.out_channels)
        throw OutOfBounds("weight matrix shape");

    bool a_binary = mode == GemmMode::bnn;
    bool b_binary = mode != GemmMode::tnn;
    if (a_binary && fm.mode != Mode::binary) throw ModeMismatch("bnn requires binary activations");
    if (b_binary && weights.mode != Mode::binary) throw ModeMismatch("weights must be binary");
    if (!b_binary && weights.mode != Mode::ternary) throw ModeMismatch("weights must be ternary");

    SignMatrix cols = im2col(fm, spec);
    GemmDims dims{cols.rows, spec.out_channels, k};
    PackedB pb = b_binary ? pack_b(encode_binary(weights)) : pack_b(encode_ternary(weights));
    Int16Matrix c = a_binary ? gemm_lowbit(mode, encode_binary(cols), pb, dims)
                             : gemm_lowbit(mode, encode_ternary(cols), pb, dims);

    IntFeatureMap out;
    out.height = conv_out_dim(fm.height, spec.kernel_h, spec.stride, spec.padding);
    out.width = conv_out_dim(fm.width, spec.kernel_w, spec.stride, spec.padding);
    out.channels = spec.out_channels;
    out.values.assign(c.values.begin(), c.values.end());
    return out;
}

}  // namespace lowbit
