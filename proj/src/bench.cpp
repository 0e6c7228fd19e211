#include "lowbit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <random>

#include "lowbit/gemm.hpp"

namespace lowbit {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::int64_t kU4DepthLimit = 291;  // k_max(4, 16)

SignMatrix random_sign(std::mt19937_64& rng, int rows, int cols, Mode mode) {
    SignMatrix m(rows, cols, mode);
    if (mode == Mode::binary) {
        std::uniform_int_distribution<int> d(0, 1);
        for (auto& v : m.values) v = (std::int8_t)(d(rng) ? 1 : -1);
    } else {
        std::uniform_int_distribution<int> d(-1, 1);
        for (auto& v : m.values) v = (std::int8_t)d(rng);
    }
    return m;
}

// One benchmark configuration: the timed call plus a one-shot oracle check.
struct Runner {
    std::function<void()> run;
    std::function<bool()> oracle;
};

Runner make_lowbit_runner(GemmMode mode, std::mt19937_64& rng, GemmDims dims) {
    Mode a_mode = mode == GemmMode::bnn ? Mode::binary : Mode::ternary;
    Mode b_mode = mode == GemmMode::tnn ? Mode::ternary : Mode::binary;
    auto a_sign = std::make_shared<SignMatrix>(random_sign(rng, dims.m, dims.k, a_mode));
    auto b_sign = std::make_shared<SignMatrix>(random_sign(rng, dims.k, dims.n, b_mode));
    auto pb = std::make_shared<PackedB>(b_mode == Mode::binary ? pack_b(encode_binary(*b_sign))
                                                               : pack_b(encode_ternary(*b_sign)));
    Runner r;
    if (a_mode == Mode::binary) {
        auto a = std::make_shared<BinaryPackedMatrix>(encode_binary(*a_sign));
        r.run = [=] { (void)gemm_lowbit(mode, *a, *pb, dims); };
        r.oracle = [=] {
            Int16Matrix c = gemm_lowbit(mode, *a, *pb, dims);
            Int32Matrix ref = reference_gemm_int(*a_sign, *b_sign);
            return std::equal(c.values.begin(), c.values.end(), ref.values.begin(),
                              [](std::int16_t x, std::int32_t y) { return (std::int32_t)x == y; });
        };
    } else {
        auto a = std::make_shared<TernaryPackedMatrix>(encode_ternary(*a_sign));
        r.run = [=] { (void)gemm_lowbit(mode, *a, *pb, dims); };
        r.oracle = [=] {
            Int16Matrix c = gemm_lowbit(mode, *a, *pb, dims);
            Int32Matrix ref = reference_gemm_int(*a_sign, *b_sign);
            return std::equal(c.values.begin(), c.values.end(), ref.values.begin(),
                              [](std::int16_t x, std::int32_t y) { return (std::int32_t)x == y; });
        };
    }
    return r;
}

Runner make_f32_runner(std::mt19937_64& rng, GemmDims dims) {
    auto a = std::make_shared<FloatMatrix>(dims.m, dims.k);
    auto b = std::make_shared<FloatMatrix>(dims.k, dims.n);
    std::uniform_real_distribution<float> d(-1.0f, 1.0f);
    for (auto& v : a->values) v = d(rng);
    for (auto& v : b->values) v = d(rng);
    Runner r;
    r.run = [=] { (void)gemm_f32(*a, *b); };
    r.oracle = [=] {
        FloatMatrix c = gemm_f32(*a, *b);
        for (int i = 0; i < dims.m; ++i)
            for (int j = 0; j < dims.n; ++j) {
                double ref = 0;
                for (int t = 0; t < dims.k; ++t) ref += (double)a->at(i, t) * b->at(t, j);
                if (std::fabs(ref - c.at(i, j)) > 1e-3) return false;
            }
        return true;
    };
    return r;
}

Runner make_quantized_runner(int bits, std::mt19937_64& rng, GemmDims dims) {
    QuantParams qa{0.05f, 3, bits};
    QuantParams qb{0.02f, 7, bits};
    Int32Matrix ah, bh;
    ah.rows = dims.m;
    ah.cols = dims.k;
    bh.rows = dims.k;
    bh.cols = dims.n;
    std::uniform_int_distribution<int> d(0, qa.qmax());
    ah.values.resize((size_t)dims.m * dims.k);
    bh.values.resize((size_t)dims.k * dims.n);
    for (auto& v : ah.values) v = d(rng);
    for (auto& v : bh.values) v = d(rng);
    auto in = std::make_shared<QuantizedGemmInputs>(
        make_quantized_inputs(std::move(ah), std::move(bh), qa, qb));
    Runner r;
    r.run = [=] { (void)gemm_quantized(*in, dims); };
    r.oracle = [=] {
        QuantizedGemmResult res = gemm_quantized(*in, dims);
        for (int i = 0; i < dims.m; ++i)
            for (int j = 0; j < dims.n; ++j) {
                std::int64_t ref = 0;
                for (int t = 0; t < dims.k; ++t)
                    ref += (std::int64_t)(in->a_hat.at(i, t) - in->qa.zero_point) *
                           (in->b_hat.at(t, j) - in->qb.zero_point);
                if (ref != res.c_tilde.at(i, j)) return false;
            }
        return true;
    };
    return r;
}

Runner make_runner(BenchModeId mode, std::mt19937_64& rng, GemmDims dims) {
    switch (mode) {
        case BenchModeId::f32: return make_f32_runner(rng, dims);
        case BenchModeId::u8: return make_quantized_runner(8, rng, dims);
        case BenchModeId::u4: return make_quantized_runner(4, rng, dims);
        case BenchModeId::tnn: return make_lowbit_runner(GemmMode::tnn, rng, dims);
        case BenchModeId::tbn: return make_lowbit_runner(GemmMode::tbn, rng, dims);
        case BenchModeId::bnn: return make_lowbit_runner(GemmMode::bnn, rng, dims);
    }
    throw InvalidPlan("unknown mode");
}

bool mode_skips_depth(BenchModeId mode, int depth) {
    return mode == BenchModeId::u4 && depth > kU4DepthLimit;
}

double time_once(const std::function<void()>& run) {
    auto t0 = Clock::now();
    run();
    auto t1 = Clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

void validate(const BenchPlan& plan) {
    if (plan.modes.empty()) throw InvalidPlan("no modes");
    if (plan.heights.empty() || plan.widths.empty() || plan.depths.empty())
        throw InvalidPlan("empty size list");
    if (plan.inner_repeats < 1 || plan.outer_repeats < 1) throw InvalidPlan("repeats must be >= 1");
    for (int v : plan.heights)
        if (v < 1) throw InvalidPlan("height must be positive");
    for (int v : plan.widths)
        if (v < 1) throw InvalidPlan("width must be positive");
    for (int v : plan.depths) {
        if (v < 1) throw InvalidPlan("depth must be positive");
        if (v > kMaxDepth16) throw InvalidPlan("depth exceeds 16-bit k_max");
    }
    for (size_t i = 0; i < plan.modes.size(); ++i)
        for (size_t j = i + 1; j < plan.modes.size(); ++j)
            if (plan.modes[i] == plan.modes[j]) throw InvalidPlan("duplicate mode");
}

}  // namespace

std::string bench_mode_name(BenchModeId mode) {
    switch (mode) {
        case BenchModeId::f32: return "f32";
        case BenchModeId::u8: return "u8";
        case BenchModeId::u4: return "u4";
        case BenchModeId::tnn: return "tnn";
        case BenchModeId::tbn: return "tbn";
        case BenchModeId::bnn: return "bnn";
    }
    return "?";
}

BenchModeId bench_mode_from_name(const std::string& name) {
    for (BenchModeId m : {BenchModeId::f32, BenchModeId::u8, BenchModeId::u4, BenchModeId::tnn,
                          BenchModeId::tbn, BenchModeId::bnn})
        if (bench_mode_name(m) == name) return m;
    throw InvalidPlan("unknown mode name: " + name);
}

BenchResult run_bench(const BenchPlan& plan) {
    validate(plan);
    BenchResult result;
    size_t n_modes = plan.modes.size();
    size_t grid = plan.heights.size() * plan.widths.size() * plan.depths.size();
    // timings indexed [mode][config]
    std::vector<std::vector<double>> times(n_modes, std::vector<double>(grid, -1.0));

    for (size_t mi = 0; mi < n_modes; ++mi) {
        BenchModeId mode = plan.modes[mi];
        size_t ci = 0;
        for (int h : plan.heights)
            for (int w : plan.widths)
                for (int d : plan.depths) {
                    BenchTiming t{mode, h, w, d, 0.0, 0.0, false};
                    if (mode_skips_depth(mode, d)) {
                        t.skipped = true;
                        result.timings.push_back(t);
                        ++ci;
                        continue;
                    }
                    std::seed_seq seq{plan.seed, (std::uint64_t)mode, (std::uint64_t)h,
                                      (std::uint64_t)w, (std::uint64_t)d};
                    std::mt19937_64 rng(seq);
                    Runner r = make_runner(mode, rng, GemmDims{h, w, d});
                    if (!r.oracle())
                        throw OracleCheckFailure("oracle mismatch for " + bench_mode_name(mode) +
                                                 " at " + std::to_string(h) + "x" +
                                                 std::to_string(w) + "x" + std::to_string(d));
                    r.run();  // warm-up
                    double sum = 0, sumsq = 0;
                    std::vector<double> inner(plan.inner_repeats);
                    for (int o = 0; o < plan.outer_repeats; ++o) {
                        for (int i = 0; i < plan.inner_repeats; ++i) inner[i] = time_once(r.run);
                        std::nth_element(inner.begin(), inner.begin() + plan.inner_repeats / 2,
                                         inner.end());
                        double med = inner[plan.inner_repeats / 2];
                        sum += med;
                        sumsq += med * med;
                    }
                    double mean = sum / plan.outer_repeats;
                    double var = sumsq / plan.outer_repeats - mean * mean;
                    t.seconds = mean;
                    t.std_error = plan.outer_repeats > 1
                                      ? std::sqrt(std::max(var, 0.0) / (plan.outer_repeats - 1))
                                      : 0.0;
                    times[mi][ci] = mean;
                    result.timings.push_back(t);
                    ++ci;
                }
    }

    result.table.modes = plan.modes;
    result.table.ratios.assign(n_modes * n_modes, 1.0);
    for (size_t b = 0; b < n_modes; ++b)
        for (size_t a = 0; a < n_modes; ++a) {
            if (a == b) continue;
            double sum = 0;
            int count = 0;
            for (size_t c = 0; c < grid; ++c)
                if (times[a][c] > 0 && times[b][c] > 0) {
                    sum += times[b][c] / times[a][c];
                    ++count;
                }
            result.table.at((int)b, (int)a) =
                count ? sum / count : std::numeric_limits<double>::quiet_NaN();
        }
    return result;
}

namespace {

// Three significant digits, trailing zeros kept (1.00, 10.9, 0.0930).
std::string fmt3(double v) {
    if (std::isnan(v)) return "nan";
    int decimals = 2;
    if (v != 0.0) {
        int e = (int)std::floor(std::log10(std::fabs(v)));
        decimals = std::max(0, 2 - e);
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace

std::string emit_report(const RatioTable& table, ReportFormat format) {
    std::string out;
    size_t n = table.modes.size();
    if (format == ReportFormat::csv) {
        out += "mode";
        for (BenchModeId m : table.modes) out += "," + bench_mode_name(m);
        out += "\n";
        for (size_t b = 0; b < n; ++b) {
            out += bench_mode_name(table.modes[b]);
            for (size_t a = 0; a < n; ++a) out += "," + fmt3(table.at((int)b, (int)a));
            out += "\n";
        }
    } else {
        out += "| B \\ A |";
        for (BenchModeId m : table.modes) out += " " + bench_mode_name(m) + " |";
        out += "\n|---|";
        for (size_t a = 0; a < n; ++a) out += "---|";
        out += "\n";
        for (size_t b = 0; b < n; ++b) {
            out += "| " + bench_mode_name(table.modes[b]) + " |";
            for (size_t a = 0; a < n; ++a) out += " " + fmt3(table.at((int)b, (int)a)) + " |";
            out += "\n";
        }
    }
    return out;
}

}  // namespace lowbit
