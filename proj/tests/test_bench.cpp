#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "lowbit/bench.hpp"

using namespace lowbit;

namespace {

BenchPlan tiny_plan(std::vector<BenchModeId> modes) {
    BenchPlan plan;
    plan.modes = std::move(modes);
    plan.heights = {16};
    plan.widths = {8};
    plan.depths = {64};
    plan.inner_repeats = 1;
    plan.outer_repeats = 1;
    return plan;
}

// Parse ratio values back out of a markdown table.
std::vector<double> parse_markdown(const std::string& text) {
    std::vector<double> vals;
    std::istringstream ss(text);
    std::string line;
    std::getline(ss, line);  // header
    std::getline(ss, line);  // separator
    while (std::getline(ss, line)) {
        size_t pos = line.find('|', 1);  // skip row label cell
        while (pos != std::string::npos) {
            size_t next = line.find('|', pos + 1);
            if (next == std::string::npos) break;
            std::string cell = line.substr(pos + 1, next - pos - 1);
            vals.push_back(std::strtod(cell.c_str(), nullptr));
            pos = next;
        }
    }
    return vals;
}

}  // namespace

TEST_CASE("single-mode plan gives the trivial table") {
    auto result = run_bench(tiny_plan({BenchModeId::f32}));
    CHECK(result.table.modes.size() == 1);
    CHECK(result.table.at(0, 0) == 1.0);
    CHECK(emit_report(result.table, ReportFormat::csv) == "mode,f32\nf32,1.00\n");
}

TEST_CASE("diagonal is exactly 1.0 for every mode") {
    auto result = run_bench(tiny_plan({BenchModeId::f32, BenchModeId::bnn, BenchModeId::tnn}));
    for (int i = 0; i < 3; ++i) CHECK(result.table.at(i, i) == 1.0);
}

TEST_CASE("u4 skips depths past its overflow limit") {
    BenchPlan plan = tiny_plan({BenchModeId::u4});
    plan.depths = {128, 384};
    auto result = run_bench(plan);
    REQUIRE(result.timings.size() == 2);
    CHECK_FALSE(result.timings[0].skipped);
    CHECK(result.timings[1].skipped);
}

TEST_CASE("invalid plans are rejected") {
    CHECK_THROWS_AS(run_bench(BenchPlan{}), InvalidPlan);
    auto no_sizes = tiny_plan({BenchModeId::f32});
    no_sizes.heights.clear();
    CHECK_THROWS_AS(run_bench(no_sizes), InvalidPlan);
    auto bad_reps = tiny_plan({BenchModeId::f32});
    bad_reps.inner_repeats = 0;
    CHECK_THROWS_AS(run_bench(bad_reps), InvalidPlan);
    auto dup = tiny_plan({BenchModeId::f32, BenchModeId::f32});
    CHECK_THROWS_AS(run_bench(dup), InvalidPlan);
    auto deep = tiny_plan({BenchModeId::bnn});
    deep.depths = {40000};
    CHECK_THROWS_AS(run_bench(deep), InvalidPlan);
}

TEST_CASE("emit_report csv golden for known ratios") {
    RatioTable t;
    t.modes = {BenchModeId::f32, BenchModeId::bnn};
    t.ratios = {1.0, 0.0917, 10.9, 1.0};
    CHECK(emit_report(t, ReportFormat::csv) ==
          "mode,f32,bnn\n"
          "f32,1.00,0.0917\n"
          "bnn,10.9,1.00\n");
}

TEST_CASE("markdown report parses back to the same values") {
    RatioTable t;
    t.modes = {BenchModeId::f32, BenchModeId::tnn, BenchModeId::bnn};
    t.ratios = {1.0, 3.63, 10.9, 0.276, 1.0, 2.99, 0.0917, 0.334, 1.0};
    auto vals = parse_markdown(emit_report(t, ReportFormat::markdown));
    REQUIRE(vals.size() == 9);
    for (size_t i = 0; i < 9; ++i) CHECK(vals[i] == doctest::Approx(t.ratios[i]).epsilon(0.005));
}

TEST_CASE("reports are deterministic for identical inputs") {
    RatioTable t;
    t.modes = {BenchModeId::tnn, BenchModeId::tbn};
    t.ratios = {1.0, 1.03, 0.97, 1.0};
    CHECK(emit_report(t, ReportFormat::csv) == emit_report(t, ReportFormat::csv));
    CHECK(emit_report(t, ReportFormat::markdown) == emit_report(t, ReportFormat::markdown));
}

TEST_CASE("mode name round-trip") {
    for (BenchModeId m : {BenchModeId::f32, BenchModeId::u8, BenchModeId::u4, BenchModeId::tnn,
                          BenchModeId::tbn, BenchModeId::bnn})
        CHECK(bench_mode_from_name(bench_mode_name(m)) == m);
    CHECK_THROWS_AS(bench_mode_from_name("i2"), InvalidPlan);
}
