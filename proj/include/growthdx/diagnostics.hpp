#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "growthdx/growth_rate.hpp"
#include "growthdx/regime_fit.hpp"
#include "growthdx/series.hpp"
#include "growthdx/trajectory.hpp"

namespace growthdx {

/**
 * @brief Alarm levels for the early-warning flags.
 *
 * The source analysis judges "too fast", "low minimum" and "close to the
 * singularity" by eye; these defaults make those judgements explicit.
 */
struct WarningThresholds {
    double fold_decrease_alarm = 5.0;         // RATE_DECLINE_TOO_FAST when max/min rate >= this
    double singularity_horizon_years = 15.0;  // SINGULARITY_PROXIMITY when t_s - last data year <= this
    double min_rate_floor = 0.005;            // RATE_FLOOR_BREACH when min refined rate < this (1/year)
    double significance = 2.0;                // slope must clear significance * stderr to be signed
    double linear_ascent_r2 = 0.75;           // LINEAR_ASCENT when ascending fit r^2 >= this
    std::size_t reversal_min_points = 2;      // REVERSAL_LOOP when this many post-peak points sit below the ascent

    void validate() const {
        if (!(fold_decrease_alarm > 0.0 && singularity_horizon_years > 0.0 && min_rate_floor > 0.0 &&
              significance > 0.0 && linear_ascent_r2 > 0.0 && reversal_min_points > 0)) {
            throw std::invalid_argument("warning thresholds must all be positive");
        }
    }
};

enum class WarningFlag {
    RateDeclineTooFast,
    RateFloorBreach,
    RegimeFlip,
    LinearAscent,
    SingularityProximity,
    ReversalLoop,
};

inline const char* to_string(WarningFlag flag) {
    switch (flag) {
        case WarningFlag::RateDeclineTooFast: return "RATE_DECLINE_TOO_FAST";
        case WarningFlag::RateFloorBreach: return "RATE_FLOOR_BREACH";
        case WarningFlag::RegimeFlip: return "REGIME_FLIP";
        case WarningFlag::LinearAscent: return "LINEAR_ASCENT";
        case WarningFlag::SingularityProximity: return "SINGULARITY_PROXIMITY";
        case WarningFlag::ReversalLoop: return "REVERSAL_LOOP";
    }
    return "UNKNOWN";
}

struct FittedRegime {
    LinearRateModel fit;
    RegimeClass regime;
};

/// Explicit fit windows, replacing breakpoint detection.
struct SegmentOverride {
    YearRange descending;
    YearRange ascending;
};

struct WarningReport {
    std::string series_name;
    std::string unit;
    int degree = 0;

    double first_year = 0.0;
    double last_year = 0.0;
    Anchor peak;  // GDP maximum; end of the pre-collapse span
    double breakpoint_year = 0.0;

    FittedRegime descending;
    FittedRegime second_segment;            // raw fit after the breakpoint, confirmed or not
    std::optional<FittedRegime> ascending;  // second segment, when it is a genuine ascent
    std::optional<double> asymptote;
    std::optional<double> singularity_year;
    std::optional<double> years_to_singularity_at_data_end;
    std::optional<TrajectoryModel> logistic_trajectory;  // anchored at the first observation
    std::optional<TrajectoryModel> ascending_trajectory;  // anchored at the peak
    RateCycleStats rate_cycle;
    std::size_t reversal_points = 0;
    std::size_t instability_sign_changes = 0;
    std::vector<WarningFlag> flags;
    std::string narrative;

    // Intermediate series, kept for CSV sidecars and plots.
    RateSeries direct;           // whole series
    RateSeries refined;          // whole-series polynomial
    RateSeries refined_pre_peak; // polynomial over the pre-collapse span
    PhaseSeries phase;           // pre-peak refined, then post-peak from the whole-series fit

    [[nodiscard]] bool has_flag(WarningFlag f) const {
        return std::find(flags.begin(), flags.end(), f) != flags.end();
    }
};

namespace detail {

inline std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

inline TimeSeries head(const TimeSeries& s, std::size_t count) {
    TimeSeries out{s.name, s.unit, {s.points.begin(), s.points.begin() + static_cast<std::ptrdiff_t>(count)}};
    return out;
}

// Sign changes in first differences of the direct rate within +/- radius years of `center`.
inline std::size_t sign_changes_near(const RateSeries& rates, double center, double radius) {
    std::vector<double> diffs;
    for (std::size_t i = 1; i < rates.points.size(); ++i) {
        const double mid = 0.5 * (rates.points[i].year + rates.points[i - 1].year);
        if (std::abs(mid - center) <= radius) diffs.push_back(rates.points[i].rate - rates.points[i - 1].rate);
    }
    std::size_t changes = 0;
    for (std::size_t i = 1; i < diffs.size(); ++i) {
        if ((diffs[i] > 0.0 && diffs[i - 1] < 0.0) || (diffs[i] < 0.0 && diffs[i - 1] > 0.0)) ++changes;
    }
    return changes;
}

}  // namespace detail

/**
 * @brief Full early-warning pipeline.
 *
 * The pre-collapse span runs from the first observation to the GDP maximum.
 * Over that span: refined rate -> phase plane -> two-segment fit (endpoint
 * years excluded) -> regime classes -> logistic asymptote and, for an
 * increasing trend, the singularity of the trajectory anchored at the peak.
 * Post-peak phase points are scored against the ascending line as reversal
 * evidence.
 *
 * An ascending segment is only reported when the direct rates over the same
 * window do not contradict it; polynomial smoothing of a saturating series
 * otherwise produces a spurious end-of-span uptick.
 */
inline WarningReport early_warning_report(const TimeSeries& series, int degree,
                                          const WarningThresholds& thresholds = {},
                                          const std::optional<SegmentOverride>& segments = std::nullopt,
                                          std::size_t min_segment = 3) {
    thresholds.validate();
    if (auto v = validate_series(series); !v.ok) {
        throw std::invalid_argument("early_warning_report: invalid series: " + v.issues.front().message);
    }
    const auto& pts = series.points;
    const auto peak_it = std::max_element(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.value < b.value;
    });
    const auto pre = detail::head(series, static_cast<std::size_t>(peak_it - pts.begin()) + 1);
    if (pre.size() < static_cast<std::size_t>(degree) + 2 || pre.size() < kMinSeriesPoints) {
        throw std::invalid_argument("early_warning_report: pre-collapse span (" + std::to_string(pre.size()) +
                                    " points up to the maximum) too short for degree " + std::to_string(degree));
    }

    WarningReport r;
    r.series_name = series.name;
    r.unit = series.unit;
    r.degree = degree;
    r.first_year = pts.front().year;
    r.last_year = pts.back().year;
    r.peak = {peak_it->year, peak_it->value};

    r.direct = direct_growth_rate(series);
    r.refined = refined_growth_rate(series, degree);
    r.refined_pre_peak = refined_growth_rate(pre, degree);

    const auto phase_pre = phase_series(pre, r.refined_pre_peak);
    const auto phase_full = phase_series(series, r.refined);
    r.phase = phase_pre;
    for (const auto& p : phase_full.points) {
        if (p.year > r.peak.year) r.phase.points.push_back(p);
    }

    LinearRateModel desc_fit, asc_fit;
    if (segments) {
        desc_fit = fit_linear_rate_on_size(r.phase, segments->descending);
        asc_fit = fit_linear_rate_on_size(r.phase, segments->ascending);
        r.breakpoint_year = asc_fit.window.first;
    } else {
        PhaseSeries interior;
        if (phase_pre.size() >= 2) {
            interior.points.assign(phase_pre.points.begin() + 1, phase_pre.points.end() - 1);
        }
        const auto split = detect_segments(interior, min_segment);
        desc_fit = split.descending;
        asc_fit = split.ascending;
        r.breakpoint_year = split.breakpoint_year;
    }
    r.descending = {desc_fit, classify_regime(desc_fit, thresholds.significance)};
    const auto asc_class = classify_regime(asc_fit, thresholds.significance);

    bool ascent_confirmed = asc_class.kind != RegimeKind::Logistic;
    if (ascent_confirmed && asc_class.kind == RegimeKind::PseudoHyperbolic) {
        const auto direct_phase = phase_series(series, r.direct);
        const auto check = fit_linear_rate_on_size(direct_phase, asc_fit.window);
        ascent_confirmed = classify_regime(check, thresholds.significance).kind != RegimeKind::Logistic;
    }
    r.second_segment = {asc_fit, asc_class};
    if (ascent_confirmed) r.ascending = r.second_segment;

    if (r.descending.regime.kind == RegimeKind::Logistic && desc_fit.a > 0.0) {
        r.asymptote = logistic_asymptote(desc_fit);
        r.logistic_trajectory = anchor_trajectory(desc_fit, {pts.front().year, pts.front().value});
    }

    const bool rebound = r.ascending && r.ascending->regime.kind == RegimeKind::PseudoHyperbolic;
    if (rebound) {
        r.ascending_trajectory = anchor_trajectory(asc_fit, r.peak);
        r.singularity_year = singularity_time(*r.ascending_trajectory);
        if (r.singularity_year) r.years_to_singularity_at_data_end = *r.singularity_year - r.last_year;
        for (const auto& p : r.phase.points) {
            if (p.year > r.peak.year && p.rate < asc_fit.predict(p.size)) ++r.reversal_points;
        }
    }

    r.rate_cycle = rate_cycle_stats(r.refined_pre_peak);
    r.instability_sign_changes = detail::sign_changes_near(r.direct, r.rate_cycle.year_of_min, 3.0);

    const auto& rc = r.rate_cycle;
    if (rebound && rc.fold_decrease && *rc.fold_decrease >= thresholds.fold_decrease_alarm) {
        r.flags.push_back(WarningFlag::RateDeclineTooFast);
    }
    if (rebound && rc.min < thresholds.min_rate_floor) r.flags.push_back(WarningFlag::RateFloorBreach);
    if (rebound && r.descending.regime.kind == RegimeKind::Logistic) r.flags.push_back(WarningFlag::RegimeFlip);
    if (rebound && asc_fit.r_squared >= thresholds.linear_ascent_r2) r.flags.push_back(WarningFlag::LinearAscent);
    if (r.years_to_singularity_at_data_end &&
        *r.years_to_singularity_at_data_end <= thresholds.singularity_horizon_years) {
        r.flags.push_back(WarningFlag::SingularityProximity);
    }
    if (rebound && r.reversal_points >= thresholds.reversal_min_points) r.flags.push_back(WarningFlag::ReversalLoop);

    using detail::fmt;
    std::string n;
    n += "Series '" + r.series_name + "', " + fmt("%.0f", r.first_year) + "-" + fmt("%.0f", r.last_year) +
         "; maximum " + fmt("%.1f", r.peak.size) + " in " + fmt("%.0f", r.peak.year) + ".\n";
    n += "Growth rate vs size before the maximum: " + std::string(to_string(r.descending.regime.kind)) +
         " trend (a = " + fmt("%.4e", desc_fit.a) + ", b = " + fmt("%.4e", desc_fit.b) + ", r2 = " +
         fmt("%.3f", desc_fit.r_squared) + ")";
    if (r.asymptote) n += ", asymptotic limit " + fmt("%.1f", *r.asymptote);
    n += ".\n";
    if (r.ascending) {
        n += "Followed by a " + std::string(to_string(r.ascending->regime.kind)) + " trend from " +
             fmt("%.0f", asc_fit.window.first) + " (a = " + fmt("%.4e", asc_fit.a) + ", b = " +
             fmt("%.4e", asc_fit.b) + ", r2 = " + fmt("%.3f", asc_fit.r_squared) + ").\n";
    } else {
        n += "No ascending growth-rate trend.\n";
    }
    if (rc.fold_decrease && rc.fold_increase) {
        n += "Refined rate fell " + fmt("%.1f", *rc.fold_decrease) + "-fold to " + fmt("%.4f", rc.min) + " in " +
             fmt("%.0f", rc.year_of_min) + " and rose " + fmt("%.1f", *rc.fold_increase) + "-fold after.\n";
    } else {
        n += "Refined rate minimum " + fmt("%.4f", rc.min) + " in " + fmt("%.0f", rc.year_of_min) +
             " is not positive; fold changes undefined.\n";
    }
    n += "Direct-rate reversals within 3 years of the minimum: " + std::to_string(r.instability_sign_changes) + ".\n";
    if (r.singularity_year) {
        n += "Pseudo-hyperbolic continuation from " + fmt("%.0f", r.peak.year) + " diverges in " +
             fmt("%.1f", *r.singularity_year) + " (" + fmt("%.1f", *r.years_to_singularity_at_data_end) +
             " years after the last observation).\n";
    }
    if (rebound) {
        n += std::to_string(r.reversal_points) + " post-peak point(s) below the ascending trend.\n";
    }
    n += "Flags:";
    if (r.flags.empty()) n += " none";
    for (auto f : r.flags) n += std::string(" ") + to_string(f);
    n += "\n";
    r.narrative = std::move(n);
    return r;
}

struct ForecastRow {
    double year = 0.0;
    double size = 0.0;  // +inf on the divergence marker
    std::string scenario;
};

/**
 * Yearly continuation of the ascending trajectory from its anchor for
 * horizon_years, stopping at the singularity with a divergence marker, plus
 * an exponential contrast at exponential_rate from the same anchor.
 */
inline std::vector<ForecastRow> forecast_scenarios(const TimeSeries& series, const TrajectoryModel& ascending,
                                                   double horizon_years, double exponential_rate) {
    if (!(horizon_years > 0.0)) throw std::invalid_argument("forecast_scenarios: horizon must be positive");
    double anchor_size = ascending.anchor_size();
    for (const auto& p : series.points) {
        if (p.year == ascending.t_ref) anchor_size = p.value;
    }
    const auto steps = static_cast<int>(std::floor(horizon_years + 1e-9));
    const auto ts = singularity_time(ascending);

    std::vector<ForecastRow> rows;
    for (int k = 1; k <= steps; ++k) {
        const double year = ascending.t_ref + k;
        if (ts && year >= *ts) {
            rows.push_back({*ts, std::numeric_limits<double>::infinity(), "pseudo_hyperbolic_divergence"});
            break;
        }
        rows.push_back({year, eval_trajectory(ascending, year), "pseudo_hyperbolic"});
    }
    for (int k = 1; k <= steps; ++k) {
        rows.push_back({ascending.t_ref + k, anchor_size * std::exp(exponential_rate * k), "exponential"});
    }
    return rows;
}

}  // namespace growthdx
