// Step-by-step use of the library on the bundled Greece GDP series.

#include <cstdio>
#include <string>

#include "growthdx/diagnostics.hpp"

int main(int argc, char** argv) {
    using namespace growthdx;
    const std::string path = argc > 1 ? argv[1] : std::string(GROWTHDX_DATA_DIR) + "/greece_gdp.csv";
    const auto gdp = load_series(path);

    const auto direct = direct_growth_rate(gdp);
    const auto refined = refined_growth_rate(gdp, 3);
    std::printf("%-6s %10s %10s %10s\n", "year", "GDP", "R direct", "R refined");
    for (std::size_t i = 0; i < gdp.size(); i += 5) {
        std::printf("%-6.0f %10.1f %10.4f %10.4f\n", gdp.points[i].year, gdp.points[i].value, direct.points[i].rate,
                    refined.points[i].rate);
    }

    // Published parameters of the increasing trend, anchored at the 2007 peak.
    const auto hyper = anchor_trajectory(-6.424e-2, 4.839e-4, {2007.0, 271.0});
    if (auto ts = singularity_time(hyper)) std::printf("\nsingularity of the published ascent: %.2f\n", *ts);
    std::printf("logistic limit of the published decline: %.1f\n", logistic_asymptote(1.553e-1, -9.112e-4));

    const auto report = early_warning_report(gdp, 3);
    std::printf("\n%s", report.narrative.c_str());
    return 0;
}
