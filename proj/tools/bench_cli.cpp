// Benchmark CLI: times the multiplication modes over a size grid and emits
// the pairwise efficiency-ratio table.
//
//   bench --modes tnn,bnn,f32 --heights 72,120 --widths 24,48 \
//         --depths 128,256 --inner 5 --outer 50 --seed 42 --format csv --out results.csv
//
// Exit codes: 0 success, 2 invalid plan, 3 oracle-check failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lowbit/bench.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    for (const auto& tok : split_csv(s)) out.push_back(std::stoi(tok));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Low-bit matrix multiplication benchmark"};

    std::string modes = "f32,u8,u4,tnn,tbn,bnn";
    std::string heights, widths, depths;
    std::string format = "csv";
    std::string out_path;
    lowbit::BenchPlan plan;

    app.add_option("--modes", modes, "comma-separated modes (f32,u8,u4,tnn,tbn,bnn)");
    app.add_option("--heights", heights, "comma-separated heights (default 72,120,240,360)");
    app.add_option("--widths", widths, "comma-separated widths (default 24,48,72,96)");
    app.add_option("--depths", depths, "comma-separated depths (default 128,256,384,512)");
    app.add_option("--inner", plan.inner_repeats, "inner repeats (median taken)");
    app.add_option("--outer", plan.outer_repeats, "outer repeats (mean taken)");
    app.add_option("--seed", plan.seed, "RNG seed");
    app.add_option("--format", format, "report format: csv or markdown");
    app.add_option("--out", out_path, "write report to file instead of stdout");
    bool raw = false;
    app.add_flag("--raw", raw, "also print raw per-configuration timings");

    CLI11_PARSE(app, argc, argv);

    try {
        plan.modes.clear();
        for (const auto& name : split_csv(modes))
            plan.modes.push_back(lowbit::bench_mode_from_name(name));
        if (!heights.empty()) plan.heights = parse_ints(heights);
        if (!widths.empty()) plan.widths = parse_ints(widths);
        if (!depths.empty()) plan.depths = parse_ints(depths);

        lowbit::ReportFormat fmt;
        if (format == "csv")
            fmt = lowbit::ReportFormat::csv;
        else if (format == "markdown")
            fmt = lowbit::ReportFormat::markdown;
        else
            throw lowbit::InvalidPlan("unknown format: " + format);

        lowbit::BenchResult result = lowbit::run_bench(plan);
        std::string report = lowbit::emit_report(result.table, fmt);

        if (raw) {
            std::cerr << "mode,height,width,depth,seconds,std_error,skipped\n";
            for (const auto& t : result.timings) {
                char line[160];
                std::snprintf(line, sizeof line, "%s,%d,%d,%d,%.9f,%.9f,%d\n",
                              lowbit::bench_mode_name(t.mode).c_str(), t.height, t.width, t.depth,
                              t.seconds, t.std_error, t.skipped ? 1 : 0);
                std::cerr << line;
            }
        }

        if (out_path.empty()) {
            std::cout << report;
        } else {
            std::ofstream f(out_path);
            if (!f) {
                std::cerr << "cannot open output file: " << out_path << "\n";
                return 1;
            }
            f << report;
        }
        return 0;
    } catch (const lowbit::OracleCheckFailure& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const lowbit::InvalidPlan& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}
