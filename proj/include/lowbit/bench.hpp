#pragma once

// Benchmark harness: per-configuration timing (median of inner repeats,
// mean over outer repeats) and the pairwise efficiency-ratio table
// E_theta(T_B(theta) / T_A(theta)) over the shared size grid.

#include <cstdint>
#include <string>
#include <vector>

#include "lowbit/errors.hpp"

namespace lowbit {

enum class BenchModeId { f32, u8, u4, tnn, tbn, bnn };

std::string bench_mode_name(BenchModeId mode);
BenchModeId bench_mode_from_name(const std::string& name);  // throws InvalidPlan

struct BenchPlan {
    std::vector<BenchModeId> modes;
    std::vector<int> heights{72, 120, 240, 360};
    std::vector<int> widths{24, 48, 72, 96};
    std::vector<int> depths{128, 256, 384, 512};
    int inner_repeats = 5;
    int outer_repeats = 50;
    std::uint64_t seed = 42;
};

struct RatioTable {
    std::vector<BenchModeId> modes;
    // ratio(row = B, col = A) = mean over grid of T_B / T_A; diagonal 1.0.
    std::vector<double> ratios;

    double at(int b, int a) const { return ratios[(size_t)b * modes.size() + a]; }
    double& at(int b, int a) { return ratios[(size_t)b * modes.size() + a]; }
};

struct BenchTiming {
    BenchModeId mode;
    int height, width, depth;
    double seconds;         // mean over outer repeats of median-of-inner
    double std_error;       // standard error of that mean
    bool skipped = false;   // depth exceeds the mode's overflow limit
};

struct BenchResult {
    RatioTable table;
    std::vector<BenchTiming> timings;
};

struct OracleCheckFailure : Error {
    using Error::Error;
};

BenchResult run_bench(const BenchPlan& plan);

enum class ReportFormat { csv, markdown };

std::string emit_report(const RatioTable& table, ReportFormat format);

}  // namespace lowbit
