// growthdx: growth-rate regime diagnostics for positive annual time series.

#include <string>

#ifdef GROWTHDX_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include "growthdx/commands.hpp"

namespace {

void add_common_options(CLI::App& cmd, growthdx::RunConfig& cfg, std::string& segments) {
    cmd.add_option("--input", cfg.input, "CSV file with a header row")->required()->check(CLI::ExistingFile);
    cmd.add_option("--year-col", cfg.load.year_column, "Year column name")->capture_default_str();
    cmd.add_option("--value-col", cfg.load.value_column, "Value column name")->capture_default_str();
    cmd.add_option("--unit", cfg.load.unit, "Unit label for the scaled values")->capture_default_str();
    cmd.add_option("--scale", cfg.load.scale, "Multiplier applied to every value (e.g. 1e-9 for dollars -> billions)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--degree", cfg.degree, "Polynomial degree of the refined growth rate")
        ->capture_default_str()
        ->check(CLI::Range(1, 20));
    cmd.add_option("--segments", segments, "auto, or explicit windows FIRST:LAST,FIRST:LAST")->capture_default_str();
    cmd.add_option("--out-dir", cfg.out_dir, "Directory for all outputs")->capture_default_str();
    cmd.add_flag("!--no-plots", cfg.plots, "Skip SVG output");
    cmd.add_option("--fold-alarm", cfg.thresholds.fold_decrease_alarm, "RATE_DECLINE_TOO_FAST fold threshold")
        ->capture_default_str();
    cmd.add_option("--horizon", cfg.thresholds.singularity_horizon_years,
                   "SINGULARITY_PROXIMITY horizon after the last data year")
        ->capture_default_str();
    cmd.add_option("--rate-floor", cfg.thresholds.min_rate_floor, "RATE_FLOOR_BREACH floor [1/year]")
        ->capture_default_str();
    cmd.add_option("--significance", cfg.thresholds.significance, "Slope significance multiplier")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"growthdx: growth-rate regime diagnostics and early-warning reports"};
    app.require_subcommand(1);

    growthdx::RunConfig cfg;
    std::string segments = "auto";

    auto* rates = app.add_subcommand("rates", "Direct and refined growth rates (rates.csv, fig_rates.svg)");
    auto* phase = app.add_subcommand("phase", "Growth rate vs size with two linear trends (phase.csv, fig_phase.svg)");
    auto* report = app.add_subcommand("report", "Early-warning report (report.json, fig_trajectory.svg)");
    for (auto* cmd : {rates, phase, report}) add_common_options(*cmd, cfg, segments);

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.segments = growthdx::parse_segments(segments);
    } catch (const std::exception& e) {
        std::cerr << "growthdx: " << e.what() << '\n';
        return 2;
    }

    if (rates->parsed()) return growthdx::cmd_rates(cfg);
    if (phase->parsed()) return growthdx::cmd_phase(cfg);
    return growthdx::cmd_report(cfg);
}
