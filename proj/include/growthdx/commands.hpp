#pragma once

#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "growthdx/diagnostics.hpp"
#include "growthdx/report_json.hpp"
#include "growthdx/series.hpp"
#include "growthdx/svg.hpp"

namespace growthdx {

inline constexpr int kDefaultDegree = 3;

struct RunConfig {
    std::string input;
    LoadOptions load;
    int degree = kDefaultDegree;
    std::optional<SegmentOverride> segments;  // nullopt = auto-detect
    WarningThresholds thresholds;
    std::string out_dir = ".";
    bool plots = true;
    double forecast_horizon = 10.0;
};

/// "auto" -> nullopt; "1960:1987,1988:2007" -> explicit descending/ascending windows.
inline std::optional<SegmentOverride> parse_segments(const std::string& text) {
    if (text.empty() || text == "auto") return std::nullopt;
    auto parse_range = [](std::string_view part) {
        const auto colon = part.find(':');
        YearRange r;
        if (colon == std::string_view::npos || !detail::parse_double(part.substr(0, colon), r.first) ||
            !detail::parse_double(part.substr(colon + 1), r.last) || r.first > r.last) {
            throw std::invalid_argument("bad segment range '" + std::string(part) + "' (expected FIRST:LAST)");
        }
        return r;
    };
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw std::invalid_argument("--segments needs two ranges, e.g. 1960:1987,1988:2007");
    }
    const std::string_view sv(text);
    SegmentOverride s{parse_range(sv.substr(0, comma)), parse_range(sv.substr(comma + 1))};
    if (s.descending.last > s.ascending.first) {
        throw std::invalid_argument("--segments: descending window must end before the ascending one starts");
    }
    return s;
}

namespace detail {

inline std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
    std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!std::filesystem::is_directory(dir)) {
        throw std::runtime_error("cannot create output directory '" + cfg.out_dir + "'");
    }
    return dir;
}

/// Write through a temporary so a failed write never leaves a truncated file.
template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& body) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
        body(out);
        out.flush();
        if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

inline std::string csv_num(double v) { return std::isfinite(v) ? format_double(v) : (v > 0 ? "inf" : "nan"); }

inline TimeSeries load_input(const RunConfig& cfg) {
    if (cfg.degree < 1) throw std::invalid_argument("--degree must be >= 1");
    return load_series(cfg.input, cfg.load);
}

template <typename Fn>
int run_guarded(std::ostream& err, const char* name, Fn&& fn) {
    try {
        fn();
        return 0;
    } catch (const std::exception& e) {
        err << "growthdx " << name << ": " << e.what() << '\n';
        return 1;
    }
}

}  // namespace detail

/// rates.csv (year, direct_rate, refined_rate) and fig_rates.svg.
inline int cmd_rates(const RunConfig& cfg, std::ostream& err = std::cerr) {
    return detail::run_guarded(err, "rates", [&] {
        const auto series = detail::load_input(cfg);
        const auto dir = detail::prepare_out_dir(cfg);
        const auto direct = direct_growth_rate(series);
        const auto refined = refined_growth_rate(series, cfg.degree);

        detail::write_file(dir / "rates.csv", [&](std::ostream& out) {
            out << "year,direct_rate,refined_rate\n";
            for (std::size_t i = 0; i < series.size(); ++i) {
                out << detail::csv_num(series.points[i].year) << ',' << detail::csv_num(direct.points[i].rate) << ','
                    << detail::csv_num(refined.points[i].rate) << '\n';
            }
        });
        if (!cfg.plots) return;

        svg::Plot plot("Growth rate: " + series.name, "Year", "Growth rate [1/year]");
        svg::Series d{{}, "R (direct)", "#7f7f7f", true};
        svg::Series r{{}, "R (refined, degree " + std::to_string(cfg.degree) + ")", "#1f77b4"};
        for (std::size_t i = 0; i < series.size(); ++i) {
            d.xy.emplace_back(direct.points[i].year, direct.points[i].rate);
            r.xy.emplace_back(refined.points[i].year, refined.points[i].rate);
        }
        plot.add(std::move(d));
        plot.add(std::move(r));
        detail::write_file(dir / "fig_rates.svg", [&](std::ostream& out) { plot.write(out); });
    });
}

/// phase.csv (year, size, refined_rate), phase_fits.csv and fig_phase.svg.
inline int cmd_phase(const RunConfig& cfg, std::ostream& err = std::cerr) {
    return detail::run_guarded(err, "phase", [&] {
        const auto series = detail::load_input(cfg);
        const auto dir = detail::prepare_out_dir(cfg);
        const auto rep = early_warning_report(series, cfg.degree, cfg.thresholds, cfg.segments);

        detail::write_file(dir / "phase.csv", [&](std::ostream& out) {
            out << "year,size,refined_rate\n";
            for (const auto& p : rep.phase.points) {
                out << detail::csv_num(p.year) << ',' << detail::csv_num(p.size) << ',' << detail::csv_num(p.rate)
                    << '\n';
            }
        });
        detail::write_file(dir / "phase_fits.csv", [&](std::ostream& out) {
            out << "segment,first_year,last_year,a,b,a_stderr,b_stderr,r2,regime,breakpoint_year\n";
            auto row = [&](const char* name, const FittedRegime& f) {
                out << name << ',' << detail::csv_num(f.fit.window.first) << ',' << detail::csv_num(f.fit.window.last)
                    << ',' << detail::csv_num(f.fit.a) << ',' << detail::csv_num(f.fit.b) << ','
                    << detail::csv_num(f.fit.a_stderr) << ',' << detail::csv_num(f.fit.b_stderr) << ','
                    << detail::csv_num(f.fit.r_squared) << ',' << to_string(f.regime.kind) << ','
                    << detail::csv_num(rep.breakpoint_year) << '\n';
            };
            row("descending", rep.descending);
            row("ascending", rep.second_segment);
        });
        if (!cfg.plots) return;

        svg::Plot plot("Growth rate vs size: " + series.name, "Size [" + series.unit + "]", "Growth rate [1/year]");
        svg::Series pre{{}, "refined rate (to peak)", "#1f77b4", true};
        svg::Series post{{}, "refined rate (after peak)", "#ff7f0e", true};
        double bp_size = 0.0;
        for (const auto& p : rep.phase.points) {
            (p.year <= rep.peak.year ? pre : post).xy.emplace_back(p.size, p.rate);
            if (p.year == rep.breakpoint_year) bp_size = p.size;
        }
        auto fit_line_series = [&](const FittedRegime& f, const char* label, const char* color) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (const auto& p : rep.phase.points) {
                if (f.fit.window.contains(p.year) && p.year <= rep.peak.year) {
                    lo = std::min(lo, p.size);
                    hi = std::max(hi, p.size);
                }
            }
            const double pad = 0.1 * (hi - lo);
            svg::Series s{{}, label, color, false, true};
            s.xy = {{lo - pad, f.fit.predict(lo - pad)}, {hi + pad, f.fit.predict(hi + pad)}};
            return s;
        };
        plot.add(std::move(pre));
        if (!post.xy.empty()) plot.add(std::move(post));
        plot.add(fit_line_series(rep.descending, "first trend", "#2ca02c"));
        plot.add(fit_line_series(rep.second_segment, "second trend", "#d62728"));
        plot.add_marker({bp_size, "breakpoint " + detail::fmt("%.0f", rep.breakpoint_year), true});
        detail::write_file(dir / "fig_phase.svg", [&](std::ostream& out) { plot.write(out); });
    });
}

/// report.json, forecast.csv (when a singular ascent exists) and fig_trajectory.svg.
inline int cmd_report(const RunConfig& cfg, std::ostream& err = std::cerr) {
    return detail::run_guarded(err, "report", [&] {
        const auto series = detail::load_input(cfg);
        const auto dir = detail::prepare_out_dir(cfg);
        const auto rep = early_warning_report(series, cfg.degree, cfg.thresholds, cfg.segments);

        detail::write_file(dir / "report.json", [&](std::ostream& out) { out << to_json(rep).dump(2) << '\n'; });

        if (rep.ascending_trajectory) {
            const double last_rate = rep.refined_pre_peak.points.back().rate;
            const auto rows = forecast_scenarios(series, *rep.ascending_trajectory, cfg.forecast_horizon, last_rate);
            detail::write_file(dir / "forecast.csv", [&](std::ostream& out) {
                out << "year,size,scenario\n";
                for (const auto& r : rows) {
                    out << detail::csv_num(r.year) << ',' << detail::csv_num(r.size) << ',' << r.scenario << '\n';
                }
            });
        }
        if (!cfg.plots) return;

        svg::Plot plot("Trajectories: " + series.name, "Year", "Size [" + series.unit + "]");
        svg::Series data{{}, "data", "#000000", true};
        for (const auto& p : series.points) data.xy.emplace_back(p.year, p.value);
        plot.add(std::move(data));

        const double step = 0.1;
        if (rep.logistic_trajectory) {
            svg::Series s{{}, "logistic (first trend)", "#2ca02c"};
            for (double t = rep.first_year; t <= rep.last_year + 1e-9; t += step) {
                s.xy.emplace_back(t, eval_trajectory(*rep.logistic_trajectory, t));
            }
            plot.add(std::move(s));
        }
        if (rep.ascending_trajectory) {
            svg::Series s{{}, "pseudo-hyperbolic (second trend)", "#d62728"};
            const double end = rep.singularity_year ? *rep.singularity_year - 0.02 : rep.last_year + 5.0;
            for (double t = rep.ascending->fit.window.first; t < end; t += step / 4) {
                s.xy.emplace_back(t, eval_trajectory(*rep.ascending_trajectory, t));
            }
            plot.add(std::move(s));
        }
        if (rep.singularity_year) {
            plot.add_marker({*rep.singularity_year, "singularity " + detail::fmt("%.1f", *rep.singularity_year)});
        }
        if (rep.asymptote) {
            plot.add_marker({*rep.asymptote, "limit " + detail::fmt("%.0f", *rep.asymptote), false});
        }
        plot.set_y_limits(0.0, 2.0 * rep.peak.size);
        detail::write_file(dir / "fig_trajectory.svg", [&](std::ostream& out) { plot.write(out); });
    });
}

}  // namespace growthdx
