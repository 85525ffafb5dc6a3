#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "growthdx/series.hpp"

namespace growthdx {

enum class RateMethod { Direct, Refined };

struct RatePoint {
    double year = 0.0;
    double rate = 0.0;  // 1/year
};

/// Empirical growth rate R = (1/S) dS/dt per year. degree is meaningful for Refined only.
struct RateSeries {
    RateMethod method = RateMethod::Direct;
    int degree = 0;
    std::vector<RatePoint> points;

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

struct PhasePoint {
    double year = 0.0;
    double size = 0.0;
    double rate = 0.0;
};

/// (S, R) pairs ordered by year. Keeping the year makes the loop traceable.
struct PhaseSeries {
    std::vector<PhasePoint> points;

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

/**
 * @brief Direct growth rate from finite differences of ln S.
 *
 * Interior points use the central difference over the actual year span
 * (non-uniform spacing allowed), endpoints use one-sided differences.
 */
inline RateSeries direct_growth_rate(const TimeSeries& series) {
    const auto& p = series.points;
    if (p.size() < 3) throw std::invalid_argument("direct_growth_rate: need at least 3 points");
    const std::size_t n = p.size();
    RateSeries out{RateMethod::Direct, 0, {}};
    out.points.resize(n);
    auto slope = [&](std::size_t i, std::size_t j) {
        return (std::log(p[j].value) - std::log(p[i].value)) / (p[j].year - p[i].year);
    };
    out.points[0] = {p[0].year, slope(0, 1)};
    for (std::size_t i = 1; i + 1 < n; ++i) out.points[i] = {p[i].year, slope(i - 1, i + 1)};
    out.points[n - 1] = {p[n - 1].year, slope(n - 2, n - 1)};
    return out;
}

/// Least-squares polynomial in a centered, scaled abscissa u = (t - center) / half_width.
struct ScaledPolynomial {
    double center = 0.0;
    double half_width = 1.0;
    std::vector<double> coefficients;  // in u, lowest order first

    [[nodiscard]] double operator()(double t) const {
        const double u = (t - center) / half_width;
        double acc = 0.0;
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * u + *it;
        return acc;
    }

    /// d/dt, with the chain-rule factor 1/half_width.
    [[nodiscard]] double derivative(double t) const {
        const double u = (t - center) / half_width;
        double acc = 0.0;
        for (std::size_t k = coefficients.size(); k-- > 1;) acc = acc * u + static_cast<double>(k) * coefficients[k];
        return acc / half_width;
    }
};

inline ScaledPolynomial fit_scaled_polynomial(const std::vector<double>& x, const std::vector<double>& y, int degree) {
    if (degree < 0) throw std::invalid_argument("polynomial degree must be non-negative");
    const auto n = static_cast<Eigen::Index>(x.size());
    const Eigen::Index m = degree + 1;
    if (n < m) throw std::invalid_argument("polynomial fit: fewer points than coefficients");

    ScaledPolynomial poly;
    double sum = 0.0;
    for (double v : x) sum += v;
    poly.center = sum / static_cast<double>(n);
    double spread = 0.0;
    for (double v : x) spread = std::max(spread, std::abs(v - poly.center));
    poly.half_width = spread > 0.0 ? spread : 1.0;

    Eigen::MatrixXd design(n, m);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double u = (x[static_cast<std::size_t>(i)] - poly.center) / poly.half_width;
        double pw = 1.0;
        for (Eigen::Index k = 0; k < m; ++k) {
            design(i, k) = pw;
            pw *= u;
        }
        rhs(i) = y[static_cast<std::size_t>(i)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-12);
    if (qr.rank() < m) throw std::domain_error("polynomial fit: design matrix is numerically singular");
    const Eigen::VectorXd c = qr.solve(rhs);
    poly.coefficients.assign(c.data(), c.data() + c.size());
    return poly;
}

/**
 * @brief Refined growth rate: derivative of a least-squares polynomial in ln S.
 *
 * One global polynomial of the given degree is fitted to (year, ln S) and
 * differentiated analytically; d(ln S)/dt is R directly. Exact for
 * log-polynomial inputs of degree <= `degree`.
 */
inline RateSeries refined_growth_rate(const TimeSeries& series, int degree) {
    if (degree < 1) throw std::invalid_argument("refined_growth_rate: degree must be >= 1");
    if (series.size() < static_cast<std::size_t>(degree) + 2) {
        throw std::invalid_argument("refined_growth_rate: degree " + std::to_string(degree) + " needs at least " +
                                    std::to_string(degree + 2) + " points, series has " +
                                    std::to_string(series.size()));
    }
    std::vector<double> t, ln_s;
    t.reserve(series.size());
    ln_s.reserve(series.size());
    for (const auto& p : series.points) {
        t.push_back(p.year);
        ln_s.push_back(std::log(p.value));
    }
    const auto poly = fit_scaled_polynomial(t, ln_s, degree);

    RateSeries out{RateMethod::Refined, degree, {}};
    out.points.reserve(t.size());
    for (double year : t) out.points.push_back({year, poly.derivative(year)});
    return out;
}

inline PhaseSeries phase_series(const TimeSeries& series, const RateSeries& rates) {
    if (series.size() != rates.size()) throw std::invalid_argument("phase_series: series and rates differ in length");
    PhaseSeries out;
    out.points.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.points[i].year != rates.points[i].year) {
            throw std::invalid_argument("phase_series: year mismatch at index " + std::to_string(i));
        }
        out.points.push_back({series.points[i].year, series.points[i].value, rates.points[i].rate});
    }
    return out;
}

/// Fall-minimum-rise summary. Folds are empty when the minimum is not positive.
struct RateCycleStats {
    double max_before_min = 0.0;
    double min = 0.0;
    double max_after_min = 0.0;
    double year_of_min = 0.0;
    std::optional<double> fold_decrease;
    std::optional<double> fold_increase;
};

inline RateCycleStats rate_cycle_stats(const RateSeries& rates) {
    if (rates.points.empty()) throw std::invalid_argument("rate_cycle_stats: empty rate series");
    const auto& p = rates.points;
    const auto min_it = std::min_element(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.rate < b.rate; });
    const auto by_rate = [](const auto& a, const auto& b) { return a.rate < b.rate; };

    RateCycleStats s;
    s.min = min_it->rate;
    s.year_of_min = min_it->year;
    s.max_before_min = std::max_element(p.begin(), min_it + 1, by_rate)->rate;
    s.max_after_min = std::max_element(min_it, p.end(), by_rate)->rate;
    if (s.min > 0.0) {
        s.fold_decrease = s.max_before_min / s.min;
        s.fold_increase = s.max_after_min / s.min;
    }
    return s;
}

}  // namespace growthdx
