#include <doctest.h>

#include <cmath>
#include <tuple>

#include "lowbit/gemm.hpp"
#include "test_helpers.hpp"

using namespace lowbit;

namespace {

Int16Matrix run_lowbit(GemmMode mode, const SignMatrix& a, const SignMatrix& b,
                       const GemmConfig& cfg = {}) {
    GemmDims dims{a.rows, b.cols, a.cols};
    if (mode == GemmMode::bnn)
        return gemm_lowbit(mode, encode_binary(a), pack_b(encode_binary(b)), dims, cfg);
    PackedB pb = mode == GemmMode::tnn ? pack_b(encode_ternary(b)) : pack_b(encode_binary(b));
    return gemm_lowbit(mode, encode_ternary(a), pb, dims, cfg);
}

SignMatrix constant_sign(int rows, int cols, int v, Mode mode) {
    SignMatrix m(rows, cols, mode);
    for (auto& e : m.values) e = (std::int8_t)v;
    return m;
}

Mode a_mode(GemmMode m) { return m == GemmMode::bnn ? Mode::binary : Mode::ternary; }
Mode b_mode(GemmMode m) { return m == GemmMode::tnn ? Mode::ternary : Mode::binary; }

}  // namespace

TEST_CASE("gemm_lowbit all-plus golden") {
    auto a = constant_sign(16, 128, 1, Mode::binary);
    auto b = constant_sign(128, 8, 1, Mode::binary);
    auto c = run_lowbit(GemmMode::bnn, a, b);
    for (auto v : c.values) CHECK(v == 128);
}

TEST_CASE("gemm_lowbit diag-like ternary A") {
    std::mt19937 rng(21);
    SignMatrix a(24, 40, Mode::ternary);
    std::uniform_int_distribution<int> col(0, 39), sign(0, 1);
    for (int i = 0; i < 24; ++i) a.at(i, col(rng)) = sign(rng) ? 1 : -1;
    auto b = testutil::random_sign(rng, 40, 16, Mode::ternary);
    auto c = run_lowbit(GemmMode::tnn, a, b);
    CHECK(testutil::same_values(c, reference_gemm_int(a, b)));
}

TEST_CASE("gemm_lowbit equals oracle on non-aligned shapes") {
    std::mt19937 rng(31);
    for (GemmMode mode : {GemmMode::bnn, GemmMode::tnn, GemmMode::tbn})
        for (int m : {1, 15, 17, 70})
            for (int n : {1, 7, 9, 25})
                for (int k : {1, 7, 9, 500}) {
                    auto a = testutil::random_sign(rng, m, k, a_mode(mode));
                    auto b = testutil::random_sign(rng, k, n, b_mode(mode));
                    auto c = run_lowbit(mode, a, b);
                    REQUIRE(testutil::same_values(c, reference_gemm_int(a, b)));
                }
}

TEST_CASE("gemm_lowbit on a sample of the benchmark grid") {
    std::mt19937 rng(32);
    for (GemmMode mode : {GemmMode::bnn, GemmMode::tnn, GemmMode::tbn})
        for (auto [m, n, k] : std::vector<std::tuple<int, int, int>>{
                 {72, 24, 128}, {120, 96, 256}, {240, 48, 384}}) {
            auto a = testutil::random_sign(rng, m, k, a_mode(mode));
            auto b = testutil::random_sign(rng, k, n, b_mode(mode));
            REQUIRE(testutil::same_values(run_lowbit(mode, a, b), reference_gemm_int(a, b)));
        }
}

TEST_CASE("depth-slicing invariance") {
    std::mt19937 rng(33);
    for (GemmMode mode : {GemmMode::bnn, GemmMode::tnn, GemmMode::tbn}) {
        auto a = testutil::random_sign(rng, 33, 700, a_mode(mode));
        auto b = testutil::random_sign(rng, 700, 19, b_mode(mode));
        GemmConfig c64{64}, c512{512}, c4096{4096};
        auto r64 = run_lowbit(mode, a, b, c64);
        auto r512 = run_lowbit(mode, a, b, c512);
        auto r4096 = run_lowbit(mode, a, b, c4096);
        CHECK(r64.values == r512.values);
        CHECK(r512.values == r4096.values);
    }
}

TEST_CASE("gemm_lowbit depth contract") {
    auto a = constant_sign(16, 32768, 1, Mode::binary);
    auto b = constant_sign(32768, 8, 1, Mode::binary);
    auto pa = encode_binary(a);
    auto pb = pack_b(encode_binary(b));
    CHECK_THROWS_AS(gemm_lowbit(GemmMode::bnn, pa, pb, GemmDims{16, 8, 32768}), DepthOverflow);

    auto a2 = constant_sign(16, 32767, 1, Mode::binary);
    auto b2 = constant_sign(32767, 8, 1, Mode::binary);
    auto c = gemm_lowbit(GemmMode::bnn, encode_binary(a2), pack_b(encode_binary(b2)),
                         GemmDims{16, 8, 32767});
    for (auto v : c.values) CHECK(v == 32767);
}

TEST_CASE("gemm_lowbit mode mismatch") {
    std::mt19937 rng(34);
    auto a = encode_ternary(testutil::random_sign(rng, 16, 16, Mode::ternary));
    auto bb = pack_b(encode_binary(testutil::random_sign(rng, 16, 8, Mode::binary)));
    auto bt = pack_b(encode_ternary(testutil::random_sign(rng, 16, 8, Mode::ternary)));
    CHECK_THROWS_AS(gemm_lowbit(GemmMode::tnn, a, bb, GemmDims{16, 8, 16}), ModeMismatch);
    CHECK_THROWS_AS(gemm_lowbit(GemmMode::tbn, a, bt, GemmDims{16, 8, 16}), ModeMismatch);
    CHECK_THROWS_AS(gemm_lowbit(GemmMode::bnn, a, bb, GemmDims{16, 8, 16}), ModeMismatch);
}

TEST_CASE("gemm_f32 goldens and oracle") {
    FloatMatrix eye(4, 4), b(4, 3);
    for (int i = 0; i < 4; ++i) eye.at(i, i) = 1.0f;
    float x = 0.5f;
    for (auto& v : b.values) v = (x += 0.25f);
    auto c = gemm_f32(eye, b);
    CHECK(c.values == b.values);

    FloatMatrix a1(1, 1), b1(1, 1);
    a1.at(0, 0) = 2.0f;
    b1.at(0, 0) = 3.0f;
    CHECK(gemm_f32(a1, b1).at(0, 0) == doctest::Approx(6.0f));

    std::mt19937 rng(35);
    std::uniform_real_distribution<float> d(-1.0f, 1.0f);
    FloatMatrix ra(72, 128), rb(128, 24);
    for (auto& v : ra.values) v = d(rng);
    for (auto& v : rb.values) v = d(rng);
    auto rc = gemm_f32(ra, rb);
    for (int i = 0; i < 72; ++i)
        for (int j = 0; j < 24; ++j) {
            float ref = 0;
            for (int t = 0; t < 128; ++t) ref += ra.at(i, t) * rb.at(t, j);
            CHECK(std::fabs(ref - rc.at(i, j)) <= 1e-4);
        }
}

TEST_CASE("gemm_quantized decomposition") {
    // 1x1x2 worked example
    Int32Matrix ah, bh;
    ah.rows = 1; ah.cols = 2; ah.values = {3, 5};
    bh.rows = 2; bh.cols = 1; bh.values = {2, 4};
    auto in = make_quantized_inputs(ah, bh, QuantParams{1.0f, 1, 4}, QuantParams{1.0f, 2, 4});
    auto res = gemm_quantized(in, GemmDims{1, 1, 2});
    CHECK(res.c_tilde.at(0, 0) == 8);

    // zero zero-points: c_tilde is the plain integer product
    auto in0 = make_quantized_inputs(ah, bh, QuantParams{1.0f, 0, 4}, QuantParams{1.0f, 0, 4});
    CHECK(gemm_quantized(in0, GemmDims{1, 1, 2}).c_tilde.at(0, 0) == 26);

    // random instances match the direct wide-integer form
    std::mt19937 rng(36);
    for (int bits : {4, 8})
        for (int rep = 0; rep < 20; ++rep) {
            int m = 5, n = 6, k = 40;
            QuantParams qa{0.1f, 2, bits}, qb{0.3f, 5, bits};
            Int32Matrix a, b;
            a.rows = m; a.cols = k;
            b.rows = k; b.cols = n;
            std::uniform_int_distribution<int> d(0, qa.qmax());
            a.values.resize((size_t)m * k);
            b.values.resize((size_t)k * n);
            for (auto& v : a.values) v = d(rng);
            for (auto& v : b.values) v = d(rng);
            auto inputs = make_quantized_inputs(a, b, qa, qb);
            auto r = gemm_quantized(inputs, GemmDims{m, n, k});
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) {
                    std::int64_t ref = 0;
                    for (int t = 0; t < k; ++t)
                        ref += (std::int64_t)(a.at(i, t) - qa.zero_point) *
                               (b.at(t, j) - qb.zero_point);
                    REQUIRE(r.c_tilde.at(i, j) == ref);
                }
        }
}

TEST_CASE("quantized gemm matches f32 on grid-representable inputs") {
    std::mt19937 rng(37);
    int m = 9, n = 7, k = 48;
    QuantParams qa{0.5f, 3, 4}, qb{0.25f, 6, 4};
    Int32Matrix ah, bh;
    ah.rows = m; ah.cols = k;
    bh.rows = k; bh.cols = n;
    std::uniform_int_distribution<int> d(0, 15);
    ah.values.resize((size_t)m * k);
    bh.values.resize((size_t)k * n);
    for (auto& v : ah.values) v = d(rng);
    for (auto& v : bh.values) v = d(rng);

    FloatMatrix fa(m, k), fb(k, n);
    for (size_t i = 0; i < fa.values.size(); ++i) fa.values[i] = dequantize(ah.values[i], qa);
    for (size_t i = 0; i < fb.values.size(); ++i) fb.values[i] = dequantize(bh.values[i], qb);

    auto qres = gemm_quantized(make_quantized_inputs(ah, bh, qa, qb), GemmDims{m, n, k});
    auto fres = gemm_f32(fa, fb);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            REQUIRE(qres.scale * (float)qres.c_tilde.at(i, j) == fres.at(i, j));
}

TEST_CASE("overflow limit calculators") {
    CHECK(k_max(8, 32) == 66051);
    CHECK(k_max(4, 16) == 291);
    CHECK(k_max_sign(16) == 32767);
    CHECK(c_in_max(32767, 3, 3) == 3640);
    CHECK(c_in_max(291, 3, 3) == 32);
    CHECK(c_in_max(32767, 1, 1) == 32767);
}

TEST_CASE("reference oracle cross-check") {
    SignMatrix a(1, 1, Mode::ternary), b(1, 1, Mode::ternary);
    a.at(0, 0) = -1;
    b.at(0, 0) = -1;
    CHECK(reference_gemm_int(a, b).at(0, 0) == 1);

    SignMatrix a2(2, 2, Mode::ternary);
    a2.at(1, 0) = 1;
    a2.at(1, 1) = -1;
    std::mt19937 rng(38);
    auto b2 = testutil::random_sign(rng, 2, 2, Mode::ternary);
    auto c2 = reference_gemm_int(a2, b2);
    CHECK(c2.at(0, 0) == 0);
    CHECK(c2.at(0, 1) == 0);

    auto ra = testutil::random_sign(rng, 13, 29, Mode::ternary);
    auto rb = testutil::random_sign(rng, 29, 11, Mode::ternary);
    CHECK(reference_gemm_int(ra, rb).values == testutil::dot_gemm(ra, rb).values);
}
