#include "lowbit/gemm.hpp"

#include <cassert>

namespace lowbit {

namespace {

void check_cfg(const GemmConfig& cfg) {
    if (cfg.k_blk < 8 || (cfg.k_blk & 7) != 0)
        throw Error("k_blk must be a positive multiple of 8");
}

void check_dims(const GemmDims& dims, int a_rows, int a_cols, const PackedB& pb) {
    if (dims.m <= 0 || dims.n <= 0 || dims.k <= 0) throw OutOfBounds("gemm dims");
    if (a_rows != dims.m || a_cols != dims.k) throw OutOfBounds("left operand shape");
    if (pb.k != dims.k || pb.n != dims.n) throw OutOfBounds("packed right operand shape");
    if (dims.k > kMaxDepth16) throw DepthOverflow(dims.k, kMaxDepth16);
}

int min_i(int a, int b) { return a < b ? a : b; }

// Shared slice/tile driver; `kernel(ablock, b_slice_ptr, depth_bytes, k_eff, tile)`.
template <typename PackA, typename Kernel>
Int16Matrix drive(int m, int n, int k, const GemmConfig& cfg, const PackedB& pb, PackA&& pack_a,
                  Kernel&& kernel) {
    Int16Matrix c;
    c.rows = m;
    c.cols = n;
    c.values.assign((size_t)m * n, 0);
    int group = block_group_bytes(pb.mode);
    for (int d = 0; d < k; d += cfg.k_blk) {
        int k_eff = min_i(cfg.k_blk, k - d);
        int depth_bytes = (k_eff + 7) / 8;
        for (int r = 0; r < m; r += GemmConfig::m_mk) {
            PackedBlock ablock = pack_a(r, d, k_eff);
            int m_e = min_i(GemmConfig::m_mk, m - r);
            for (int cg = 0; cg < n; cg += GemmConfig::n_mk) {
                const PackedBlock& panel = pb.panels[cg / GemmConfig::n_mk];
                const std::uint8_t* b_ptr = panel.buffer.data() + (size_t)(d / 8) * group;
                AccumulatorTile tile{};
                kernel(ablock.buffer.data(), b_ptr, depth_bytes, k_eff, tile);
                int n_e = min_i(GemmConfig::n_mk, n - cg);
                for (int i = 0; i < m_e; ++i) {
                    std::int16_t* crow = c.values.data() + (size_t)(r + i) * n + cg;
                    for (int j = 0; j < n_e; ++j) {
                        crow[j] = (std::int16_t)(crow[j] + tile.at(i, j));
                        assert(crow[j] <= d + k_eff && crow[j] >= -(d + k_eff));
                    }
                }
            }
        }
    }
    return c;
}

}  // namespace

PackedB pack_b(const BinaryPackedMatrix& b) {
    PackedB pb;
    pb.mode = BlockMode::bnn_b;
    pb.n = b.cols;
    pb.k = b.rows;
    for (int c = 0; c < b.cols; c += GemmConfig::n_mk)
        pb.panels.push_back(pack_b_binary(b, c, 0, b.rows));
    return pb;
}

PackedB pack_b(const TernaryPackedMatrix& b) {
    PackedB pb;
    pb.mode = BlockMode::tnn_b;
    pb.n = b.cols;
    pb.k = b.rows;
    for (int c = 0; c < b.cols; c += GemmConfig::n_mk)
        pb.panels.push_back(pack_b_ternary(b, c, 0, b.rows));
    return pb;
}

Int16Matrix gemm_lowbit(GemmMode mode, const BinaryPackedMatrix& a, const PackedB& packed_b,
                        const GemmDims& dims, const GemmConfig& cfg) {
    check_cfg(cfg);
    if (mode != GemmMode::bnn) throw ModeMismatch("binary left operand requires bnn mode");
    if (packed_b.mode != BlockMode::bnn_b) throw ModeMismatch("bnn requires binary right operand");
    check_dims(dims, a.rows, a.cols, packed_b);
    return drive(
        dims.m, dims.n, dims.k, cfg, packed_b,
        [&](int r, int d, int k_eff) { return pack_a_binary(a, r, d, k_eff); },
        [](const std::uint8_t* ab, const std::uint8_t* bb, int db, int k_eff,
           AccumulatorTile& tile) { detail::bnn_tile(ab, bb, db, k_eff, tile); });
}

Int16Matrix gemm_lowbit(GemmMode mode, const TernaryPackedMatrix& a, const PackedB& packed_b,
                        const GemmDims& dims, const GemmConfig& cfg) {
    check_cfg(cfg);
    if (mode == GemmMode::bnn) throw ModeMismatch("bnn requires a binary left operand");
    if (mode == GemmMode::tnn && packed_b.mode != BlockMode::tnn_b)
        throw ModeMismatch("tnn requires a ternary right operand");
    if (mode == GemmMode::tbn && packed_b.mode != BlockMode::bnn_b)
        throw ModeMismatch("tbn requires a binary right operand");
    check_dims(dims, a.rows, a.cols, packed_b);
    bool tnn = mode == GemmMode::tnn;
    return drive(
        dims.m, dims.n, dims.k, cfg, packed_b,
        [&](int r, int d, int k_eff) { return pack_a_ternary(a, r, d, k_eff); },
        [tnn](const std::uint8_t* ab, const std::uint8_t* bb, int db, int /*k_eff*/,
              AccumulatorTile& tile) {
            if (tnn)
                detail::tnn_tile(ab, bb, db, tile);
            else
                detail::tbn_tile(ab, bb, db, tile);
        });
}

FloatMatrix gemm_f32(const FloatMatrix& a, const FloatMatrix& b, const GemmConfig& cfg) {
    check_cfg(cfg);
    if (a.cols != b.rows) throw OutOfBounds("f32 operand shapes");
    int m = a.rows, n = b.cols, k = a.cols;
    FloatMatrix c(m, n);
    for (int d = 0; d < k; d += cfg.k_blk) {
        int k_eff = min_i(cfg.k_blk, k - d);
        for (int r = 0; r < m; r += GemmConfig::m_mk) {
            int m_e = min_i(GemmConfig::m_mk, m - r);
            for (int cg = 0; cg < n; cg += GemmConfig::n_mk) {
                int n_e = min_i(GemmConfig::n_mk, n - cg);
                float tile[GemmConfig::m_mk][GemmConfig::n_mk] = {};
                for (int t = d; t < d + k_eff; ++t) {
                    const float* brow = b.values.data() + (size_t)t * n + cg;
                    for (int i = 0; i < m_e; ++i) {
                        float av = a.at(r + i, t);
                        for (int j = 0; j < n_e; ++j) tile[i][j] += av * brow[j];
                    }
                }
                for (int i = 0; i < m_e; ++i)
                    for (int j = 0; j < n_e; ++j) c.at(r + i, cg + j) += tile[i][j];
            }
        }
    }
    return c;
}

QuantizedGemmInputs make_quantized_inputs(Int32Matrix a_hat, Int32Matrix b_hat, QuantParams qa,
                                          QuantParams qb) {
    QuantizedGemmInputs in;
    in.a_row_sums.assign(a_hat.rows, 0);
    for (int i = 0; i < a_hat.rows; ++i)
        for (int t = 0; t < a_hat.cols; ++t) in.a_row_sums[i] += a_hat.at(i, t);
    in.b_col_sums.assign(b_hat.cols, 0);
    for (int t = 0; t < b_hat.rows; ++t)
        for (int j = 0; j < b_hat.cols; ++j) in.b_col_sums[j] += b_hat.at(t, j);
    in.a_hat = std::move(a_hat);
    in.b_hat = std::move(b_hat);
    in.qa = qa;
    in.qb = qb;
    return in;
}

QuantizedGemmResult gemm_quantized(const QuantizedGemmInputs& inputs, const GemmDims& dims) {
    const Int32Matrix& a = inputs.a_hat;
    const Int32Matrix& b = inputs.b_hat;
    if (a.rows != dims.m || a.cols != dims.k || b.rows != dims.k || b.cols != dims.n)
        throw OutOfBounds("quantized operand shapes");
    int p = inputs.qa.bits > inputs.qb.bits ? inputs.qa.bits : inputs.qb.bits;
    std::int64_t limit = k_max(p, 32);
    if (dims.k > limit) throw DepthOverflow(dims.k, limit);

    QuantizedGemmResult res;
    res.scale = inputs.qa.scale * inputs.qb.scale;
    res.c_tilde.rows = dims.m;
    res.c_tilde.cols = dims.n;
    res.c_tilde.values.assign((size_t)dims.m * dims.n, 0);
    std::int64_t za = inputs.qa.zero_point, zb = inputs.qb.zero_point;
    std::int64_t kzz = (std::int64_t)dims.k * za * zb;
    int m = dims.m, n = dims.n, k = dims.k;
    // first term accumulates in uint32, overflow-free by the k <= k_max(p,32) contract
    for (int r = 0; r < m; r += GemmConfig::m_mk) {
        int m_e = min_i(GemmConfig::m_mk, m - r);
        for (int cg = 0; cg < n; cg += GemmConfig::n_mk) {
            int n_e = min_i(GemmConfig::n_mk, n - cg);
            std::uint32_t tile[GemmConfig::m_mk][GemmConfig::n_mk] = {};
            for (int t = 0; t < k; ++t) {
                const std::int32_t* brow = b.values.data() + (size_t)t * n + cg;
                for (int i = 0; i < m_e; ++i) {
                    std::uint32_t av = (std::uint32_t)a.at(r + i, t);
                    for (int j = 0; j < n_e; ++j) tile[i][j] += av * (std::uint32_t)brow[j];
                }
            }
            for (int i = 0; i < m_e; ++i)
                for (int j = 0; j < n_e; ++j) {
                    std::int64_t v = (std::int64_t)tile[i][j] - zb * inputs.a_row_sums[r + i] -
                                     za * inputs.b_col_sums[cg + j] + kzz;
                    res.c_tilde.at(r + i, cg + j) = (std::int32_t)v;
                }
        }
    }
    return res;
}

std::int64_t k_max(int p, int q) {
    std::uint64_t acc_max = (q >= 64) ? ~0ull : ((1ull << q) - 1);
    std::uint64_t prod_max = ((1ull << p) - 1) * ((1ull << p) - 1);
    return (std::int64_t)(acc_max / prod_max);
}

std::int64_t k_max_sign(int q) { return (std::int64_t)((1ull << (q - 1)) - 1); }

std::int64_t c_in_max(std::int64_t k_max, int kernel_h, int kernel_w) {
    return k_max / ((std::int64_t)kernel_h * kernel_w);
}

Int32Matrix reference_gemm_int(const SignMatrix& a, const SignMatrix& b) {
    if (a.cols != b.rows) throw OutOfBounds("reference gemm shapes");
    Int32Matrix c;
    c.rows = a.rows;
    c.cols = b.cols;
    c.values.assign((size_t)a.rows * b.cols, 0);
    for (int i = 0; i < a.rows; ++i)
        for (int t = 0; t < a.cols; ++t) {
            int av = a.at(i, t);
            if (av == 0) continue;
            for (int j = 0; j < b.cols; ++j) c.at(i, j) += av * b.at(t, j);
        }
    return c;
}

}  // namespace lowbit
