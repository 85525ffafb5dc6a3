#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "growthdx/growth_rate.hpp"

namespace growthdx {

/// Inclusive calendar-year range.
struct YearRange {
    double first = -std::numeric_limits<double>::infinity();
    double last = std::numeric_limits<double>::infinity();

    [[nodiscard]] bool contains(double year) const noexcept { return year >= first && year <= last; }

    static YearRange all() noexcept { return {}; }
};

/**
 * @brief Straight-line fit R = a + b (x - x_origin).
 *
 * For fits against size x_origin is 0, so a and b are exactly the
 * trajectory parameters. For fits against time x_origin is the first
 * year of the window.
 */
struct LinearRateModel {
    double a = 0.0;
    double b = 0.0;
    double a_stderr = 0.0;
    double b_stderr = 0.0;
    double r_squared = 0.0;
    double sse = 0.0;
    double x_origin = 0.0;
    YearRange window;
    std::size_t n_points = 0;

    [[nodiscard]] double predict(double x) const noexcept { return a + b * (x - x_origin); }
};

// Relative resolution of a rate estimate; residual scatter below this is rounding, not signal.
inline constexpr double kRateResolution = 1e-9;

/// Ordinary least squares of y on x via centered sums.
inline LinearRateModel fit_line(std::span<const double> x, std::span<const double> y, double x_origin = 0.0) {
    const std::size_t n = x.size();
    if (n != y.size()) throw std::invalid_argument("fit_line: x and y differ in length");
    if (n < 3) throw std::invalid_argument("fit_line: need at least 3 points, got " + std::to_string(n));

    double mx = 0.0, my = 0.0, y_scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
        y_scale = std::max(y_scale, std::abs(y[i]));
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double x_scale = std::max(std::abs(mx), 1.0);
    if (!(sxx > 1e-24 * x_scale * x_scale * static_cast<double>(n))) {
        throw std::domain_error("fit_line: all abscissae identical (degenerate design)");
    }

    LinearRateModel m;
    m.n_points = n;
    m.x_origin = x_origin;
    m.b = sxy / sxx;
    m.a = my + m.b * (x_origin - mx);

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (my + m.b * (x[i] - mx));
        sse += r * r;
    }
    m.sse = sse;
    m.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;

    const double dof = static_cast<double>(n - 2);
    const double s = std::max(std::sqrt(sse / dof), kRateResolution * y_scale);
    m.b_stderr = s / std::sqrt(sxx);
    const double dxo = mx - x_origin;
    m.a_stderr = s * std::sqrt(1.0 / static_cast<double>(n) + dxo * dxo / sxx);
    return m;
}

inline LinearRateModel fit_linear_rate_on_size(const PhaseSeries& phase, YearRange window = YearRange::all()) {
    std::vector<double> x, y;
    double first = std::numeric_limits<double>::infinity(), last = -first;
    for (const auto& p : phase.points) {
        if (!window.contains(p.year)) continue;
        x.push_back(p.size);
        y.push_back(p.rate);
        first = std::min(first, p.year);
        last = std::max(last, p.year);
    }
    if (x.size() < 3) throw std::invalid_argument("fit_linear_rate_on_size: fewer than 3 points in window");
    auto m = fit_line(x, y, 0.0);
    m.window = {first, last};
    return m;
}

/// Slope in 1/year^2; intercept is the rate at the window's first year.
inline LinearRateModel fit_linear_rate_on_time(const RateSeries& rates, YearRange window = YearRange::all()) {
    std::vector<double> x, y;
    for (const auto& p : rates.points) {
        if (!window.contains(p.year)) continue;
        x.push_back(p.year);
        y.push_back(p.rate);
    }
    if (x.size() < 3) throw std::invalid_argument("fit_linear_rate_on_time: fewer than 3 points in window");
    auto m = fit_line(x, y, x.front());
    m.window = {x.front(), x.back()};
    return m;
}

struct SegmentSplit {
    double breakpoint_year = 0.0;  // first year of the second segment
    LinearRateModel descending;
    LinearRateModel ascending;
    double total_sse = 0.0;
};

/**
 * @brief Two-segment piecewise-linear fit of rate against size.
 *
 * Exhaustive sweep over split positions leaving at least min_segment points
 * on each side. Near-equal totals (within rounding of the data scale) count
 * as ties and resolve to the earliest breakpoint.
 */
inline SegmentSplit detect_segments(const PhaseSeries& phase, std::size_t min_segment = 3) {
    if (min_segment < 3) throw std::invalid_argument("detect_segments: min_segment must be >= 3");
    const std::size_t n = phase.size();
    if (n < 2 * min_segment) {
        throw std::invalid_argument("detect_segments: need at least " + std::to_string(2 * min_segment) +
                                    " phase points, got " + std::to_string(n));
    }
    std::vector<double> x(n), y(n);
    double my = 0.0, y_scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = phase.points[i].size;
        y[i] = phase.points[i].rate;
        my += y[i];
        y_scale = std::max(y_scale, std::abs(y[i]));
    }
    my /= static_cast<double>(n);
    double sst = 0.0;
    for (double v : y) sst += (v - my) * (v - my);
    const double eps = std::numeric_limits<double>::epsilon();
    const double tie = 1e-12 * sst + static_cast<double>(n) * (64 * eps * y_scale) * (64 * eps * y_scale);

    const std::span<const double> xs(x), ys(y);
    auto segment = [&](std::size_t lo, std::size_t hi) {
        auto m = fit_line(xs.subspan(lo, hi - lo), ys.subspan(lo, hi - lo), 0.0);
        m.window = {phase.points[lo].year, phase.points[hi - 1].year};
        return m;
    };

    SegmentSplit best;
    bool have = false;
    for (std::size_t k = min_segment; k + min_segment <= n; ++k) {
        auto left = segment(0, k);
        auto right = segment(k, n);
        const double total = left.sse + right.sse;
        if (!have || total < best.total_sse - tie) {
            best = {phase.points[k].year, left, right, total};
            have = true;
        }
    }
    return best;
}

enum class RegimeKind { Logistic, Exponential, PseudoHyperbolic };

inline const char* to_string(RegimeKind kind) {
    switch (kind) {
        case RegimeKind::Logistic: return "Logistic";
        case RegimeKind::Exponential: return "Exponential";
        case RegimeKind::PseudoHyperbolic: return "PseudoHyperbolic";
    }
    return "unknown";
}

struct RegimeClass {
    RegimeKind kind = RegimeKind::Exponential;
    std::string confidence_note;
};

/// Sign of b, decided only when it clears significance * b_stderr.
inline RegimeClass classify_regime(const LinearRateModel& model, double significance = 2.0) {
    RegimeClass out;
    if (model.b + significance * model.b_stderr < 0.0) out.kind = RegimeKind::Logistic;
    else if (model.b - significance * model.b_stderr > 0.0) out.kind = RegimeKind::PseudoHyperbolic;
    else out.kind = RegimeKind::Exponential;

    char buf[160];
    const double t = model.b_stderr > 0.0 ? model.b / model.b_stderr : 0.0;
    std::snprintf(buf, sizeof buf, "b = %.4e +/- %.2e (t = %.2f, threshold %.2f)", model.b, model.b_stderr, t,
                  significance);
    out.confidence_note = buf;
    return out;
}

}  // namespace growthdx
