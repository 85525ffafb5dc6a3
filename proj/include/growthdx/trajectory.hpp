#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "growthdx/regime_fit.hpp"
#include "growthdx/series.hpp"

namespace growthdx {

/// Size at which numeric continuation declares blow-up.
inline constexpr double kOverflowGuard = 1e12;

struct Anchor {
    double year = 0.0;
    double size = 0.0;
};

/// Raised when a trajectory is evaluated at or past its singularity.
class SingularityError : public std::domain_error {
public:
    SingularityError(double year, const std::string& what) : std::domain_error(what), year_(year) {}
    /// Calendar year of the singularity (NaN when no finite root exists).
    [[nodiscard]] double singularity_year() const noexcept { return year_; }

private:
    double year_;
};

/// Raised when a numeric continuation exceeds kOverflowGuard.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(double year, const std::string& what) : std::runtime_error(what), year_(year) {}
    [[nodiscard]] double year_reached() const noexcept { return year_; }

private:
    double year_;
};

/**
 * @brief Closed-form solution of dS/dt = S (a + b S).
 *
 *   S(t) = 1 / (c_shifted e^{-a t'} - b/a),   t' = t - t_ref
 *
 * The absolute-time constant C = c_shifted e^{a t_ref} is never formed: at
 * a ~ 0.15 and t ~ 1960 it overflows. Evaluation uses the equivalent form
 *
 *   1/S = e^{-a t'} / S0 - b (1 - e^{-a t'}) / a
 *
 * which has no cancellation for small a and tends to 1/S0 - b t' as a -> 0.
 */
struct TrajectoryModel {
    double a = 0.0;
    double b = 0.0;
    double c_shifted = 0.0;  // 1/S0 + b/a; NaN when a == 0
    double t_ref = 0.0;
    double inv_anchor = 1.0;  // 1/S(t_ref)

    [[nodiscard]] double anchor_size() const noexcept { return 1.0 / inv_anchor; }

    /// 1/S(t); S is finite and positive wherever this is > 0.
    [[nodiscard]] double reciprocal(double year) const noexcept {
        const double tp = year - t_ref;
        const double decay = std::exp(-a * tp);
        const double phi = a == 0.0 ? tp : -std::expm1(-a * tp) / a;
        return decay * inv_anchor - b * phi;
    }

    /// Year where 1/S crosses zero (either direction from t_ref), if any.
    [[nodiscard]] std::optional<double> denominator_root() const noexcept {
        if (b == 0.0) return std::nullopt;
        const double ratio = a * inv_anchor / b;  // a / (b S0)
        if (a == 0.0) return t_ref + inv_anchor / b;
        if (!(ratio > -1.0)) return std::nullopt;
        return t_ref + std::log1p(ratio) / a;
    }
};

inline TrajectoryModel anchor_trajectory(double a, double b, Anchor anchor) {
    if (!(anchor.size > 0.0)) throw std::invalid_argument("anchor_trajectory: anchor size must be positive");
    TrajectoryModel m;
    m.a = a;
    m.b = b;
    m.t_ref = anchor.year;
    m.inv_anchor = 1.0 / anchor.size;
    m.c_shifted = a != 0.0 ? m.inv_anchor + b / a : std::numeric_limits<double>::quiet_NaN();
    return m;
}

inline TrajectoryModel anchor_trajectory(const LinearRateModel& model, Anchor anchor) {
    return anchor_trajectory(model.a, model.b, anchor);
}

/// Forward singularity year (after t_ref), or nullopt when S stays finite going forward.
inline std::optional<double> singularity_time(const TrajectoryModel& traj) {
    const auto root = traj.denominator_root();
    if (root && *root > traj.t_ref) return root;
    return std::nullopt;
}

inline double eval_trajectory(const TrajectoryModel& traj, double year) {
    const double recip = traj.reciprocal(year);
    if (!(recip > 0.0)) {
        const auto root = traj.denominator_root();
        const double ts = root.value_or(std::numeric_limits<double>::quiet_NaN());
        throw SingularityError(ts, "trajectory undefined at year " + detail::format_double(year) +
                                       ": singularity at year " + detail::format_double(ts));
    }
    return 1.0 / recip;
}

inline TimeSeries eval_trajectory(const TrajectoryModel& traj, std::span<const double> years) {
    TimeSeries out;
    out.name = "trajectory";
    out.points.reserve(years.size());
    for (double y : years) out.points.push_back({y, eval_trajectory(traj, y)});
    return out;
}

/// Asymptotic limit a/|b| of the logistic branch (b < 0, a > 0).
inline double logistic_asymptote(double a, double b) {
    if (!(b < 0.0)) throw std::domain_error("logistic_asymptote: b >= 0 has no asymptote");
    if (!(a > 0.0)) throw std::domain_error("logistic_asymptote: a <= 0 has no positive asymptote");
    return a / -b;
}

inline double logistic_asymptote(const LinearRateModel& model) { return logistic_asymptote(model.a, model.b); }

/**
 * Fixed-step classical RK4 on dS/dt = S (a + b S), an independent check on the
 * closed form. Integration runs continuously outward from the anchor in both
 * directions; the last step to each grid year is shortened to land on it.
 */
inline TimeSeries integrate_rate_ode(double a, double b, Anchor anchor, std::span<const double> years,
                                     double step = 0.01) {
    if (!(step > 0.0)) throw std::invalid_argument("integrate_rate_ode: step must be positive");
    if (!(anchor.size > 0.0)) throw std::invalid_argument("integrate_rate_ode: anchor size must be positive");
    const auto rhs = [a, b](double s) { return s * (a + b * s); };

    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(years.size());
    for (std::size_t i = 0; i < years.size(); ++i) order.emplace_back(years[i], i);
    std::sort(order.begin(), order.end());

    std::vector<double> values(years.size());
    auto sweep = [&](auto first, auto last, double dir) {
        double t = anchor.year, s = anchor.size;
        for (auto it = first; it != last; ++it) {
            const double target = it->first;
            while (dir * (target - t) > 0.0) {
                double h = dir * step;
                const bool final_step = dir * (target - (t + h)) <= 1e-12 * step;
                if (final_step) h = target - t;
                const double k1 = rhs(s);
                const double k2 = rhs(s + 0.5 * h * k1);
                const double k3 = rhs(s + 0.5 * h * k2);
                const double k4 = rhs(s + h * k3);
                s += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
                t = final_step ? target : t + h;
                if (!std::isfinite(s) || std::abs(s) >= kOverflowGuard) {
                    throw DivergenceError(t, "integrate_rate_ode: diverged (|S| >= 1e12) at year " +
                                                 detail::format_double(t));
                }
            }
            values[it->second] = s;
        }
    };
    const auto split = std::lower_bound(order.begin(), order.end(), std::make_pair(anchor.year, std::size_t{0}));
    sweep(split, order.end(), 1.0);
    sweep(std::make_reverse_iterator(split), order.rend(), -1.0);

    TimeSeries out;
    out.name = "rk4";
    out.points.reserve(years.size());
    for (std::size_t i = 0; i < years.size(); ++i) out.points.push_back({years[i], values[i]});
    return out;
}

inline TimeSeries integrate_rate_ode(const LinearRateModel& model, Anchor anchor, std::span<const double> years,
                                     double step = 0.01) {
    return integrate_rate_ode(model.a, model.b, anchor, years, step);
}

/// Time-dependent rate f(t) as a polynomial in t' = t - t_ref, lowest order first.
struct RatePolynomial {
    std::vector<double> coefficients;
    double t_ref = 0.0;

    [[nodiscard]] double operator()(double year) const {
        const double tp = year - t_ref;
        double acc = 0.0;
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * tp + *it;
        return acc;
    }

    /// Exact antiderivative F with F(t_ref) = 0.
    [[nodiscard]] double antiderivative(double year) const {
        const double tp = year - t_ref;
        double acc = 0.0;
        for (std::size_t k = coefficients.size(); k-- > 0;) {
            acc = acc * tp + coefficients[k] / static_cast<double>(k + 1);
        }
        return acc * tp;
    }
};

/// S(t) = S0 exp(F(t) - F(t0)) for a polynomial rate f(t).
inline TimeSeries trajectory_from_time_rate(const RatePolynomial& rate, Anchor anchor, std::span<const double> years) {
    if (rate.coefficients.empty()) throw std::invalid_argument("trajectory_from_time_rate: empty rate polynomial");
    if (!(anchor.size > 0.0)) throw std::invalid_argument("trajectory_from_time_rate: anchor size must be positive");
    const double f0 = rate.antiderivative(anchor.year);
    TimeSeries out;
    out.name = "time_rate_trajectory";
    out.points.reserve(years.size());
    for (double y : years) {
        const double s = anchor.size * std::exp(rate.antiderivative(y) - f0);
        if (!std::isfinite(s) || s >= kOverflowGuard) {
            throw DivergenceError(y, "trajectory_from_time_rate: overflow at year " + detail::format_double(y));
        }
        out.points.push_back({y, s});
    }
    return out;
}

/// 1/S per year plus two shape measures: straight-line r^2 and the range of second differences.
struct ReciprocalDiagnostic {
    std::vector<SeriesPoint> points;
    double linearity_r2 = 1.0;
    double slope = 0.0;
    double min_second_difference = 0.0;
    double max_second_difference = 0.0;

    /// All second differences nonzero and of one sign.
    [[nodiscard]] bool strictly_curved() const noexcept {
        return (min_second_difference > 0.0) || (max_second_difference < 0.0);
    }
};

inline ReciprocalDiagnostic reciprocal_series(const TimeSeries& series) {
    ReciprocalDiagnostic d;
    d.points.reserve(series.size());
    std::vector<double> x, y;
    for (const auto& p : series.points) {
        d.points.push_back({p.year, 1.0 / p.value});
        x.push_back(p.year);
        y.push_back(1.0 / p.value);
    }
    if (x.size() >= 3) {
        const auto line = fit_line(x, y, 0.0);
        d.linearity_r2 = line.r_squared;
        d.slope = line.b;
        d.min_second_difference = std::numeric_limits<double>::infinity();
        d.max_second_difference = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i + 1 < y.size(); ++i) {
            // divided second difference, valid for uneven spacing
            const double h1 = x[i] - x[i - 1], h2 = x[i + 1] - x[i];
            const double dd = 2.0 * ((y[i + 1] - y[i]) / h2 - (y[i] - y[i - 1]) / h1) / (h1 + h2);
            d.min_second_difference = std::min(d.min_second_difference, dd);
            d.max_second_difference = std::max(d.max_second_difference, dd);
        }
    }
    return d;
}

}  // namespace growthdx
