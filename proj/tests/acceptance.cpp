// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "growthdx/commands.hpp"
#include "test_support.hpp"

using namespace growthdx;
namespace fs = std::filesystem;
namespace fx = growthdx::fixture;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %2d %-34s %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
    if (!ok) ++failures;
}

std::string kv(const char* key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%.6g ", key, v);
    return buf;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<double> grid(double first, double last) {
    std::vector<double> out;
    for (double t = first; t <= last + 1e-9; t += 1.0) out.push_back(t);
    return out;
}

double max_rel(const TimeSeries& x, const TimeSeries& ref) {
    double worst = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, fx::rel_diff(x.points[i].value, ref.points[i].value));
    return worst;
}

constexpr double kPublishedDescA = 1.553e-1, kPublishedDescB = -9.112e-4;
constexpr double kPublishedAscA = -6.424e-2, kPublishedAscB = 4.839e-4;

}  // namespace

int main() {
    const std::string greece_path = std::string(GROWTHDX_DATA_DIR) + "/greece_gdp.csv";
    const auto greece = load_series(greece_path);
    const auto r = early_warning_report(greece, kDefaultDegree);

    {
        const auto& f = r.descending.fit;
        report(1, "descending-trend parameters", within(f.a, 0.124, 0.186) && within(f.b, -10.9e-4, -7.3e-4),
               kv("a", f.a) + kv("b", f.b) + "window " + detail::fmt("%.0f", f.window.first) + "-" +
                   detail::fmt("%.0f", f.window.last));
    }
    {
        const double exact = logistic_asymptote(kPublishedDescA, kPublishedDescB);
        const double fitted = r.asymptote.value_or(NAN);
        report(2, "logistic asymptote", std::abs(exact - 170.43) <= 0.01 && std::abs(fitted - 170.0) <= 25.0,
               kv("published", exact) + kv("fitted", fitted));
    }
    {
        const auto& f = r.second_segment.fit;
        report(3, "ascending-trend parameters",
               r.ascending.has_value() && within(f.a, -7.71e-2, -5.14e-2) && within(f.b, 3.87e-4, 5.81e-4),
               kv("a", f.a) + kv("b", f.b));
    }
    {
        const auto exact = singularity_time(anchor_trajectory(kPublishedAscA, kPublishedAscB, {2007, 271}));
        const double fitted = r.singularity_year.value_or(NAN);
        report(4, "singularity year",
               exact && std::abs(*exact - 2017.5) <= 0.1 && within(fitted, 2015.0, 2020.0),
               kv("published", exact.value_or(NAN)) + kv("fitted", fitted));
    }
    {
        double s1960 = NAN, s2007 = NAN;
        for (const auto& p : greece.points) {
            if (p.year == 1960) s1960 = p.value;
            if (p.year == 2007) s2007 = p.value;
        }
        const double ratio = s2007 / s1960;
        report(5, "GDP growth magnitude",
               std::abs(s1960 - 44.7) <= 2 && std::abs(s2007 - 271) <= 10 && std::abs(ratio - 6.0) <= 0.5,
               kv("S1960", s1960) + kv("S2007", s2007) + kv("ratio", ratio));
    }
    {
        const auto& c = r.rate_cycle;
        const double down = c.fold_decrease.value_or(NAN), up = c.fold_increase.value_or(NAN);
        report(6, "rate cycle", within(down, 5, 20) && within(up, 3, 12), kv("fold_decrease", down) + kv("fold_increase", up));
    }
    {
        const auto years_l = grid(1960, 2014);
        const double err_l = max_rel(integrate_rate_ode(kPublishedDescA, kPublishedDescB, {1960, 44.7}, years_l, 0.01),
                                     eval_trajectory(anchor_trajectory(kPublishedDescA, kPublishedDescB, {1960, 44.7}), years_l));
        const auto years_h = grid(2007, 2015);
        const double err_h = max_rel(integrate_rate_ode(kPublishedAscA, kPublishedAscB, {2007, 271}, years_h, 0.001),
                                     eval_trajectory(anchor_trajectory(kPublishedAscA, kPublishedAscB, {2007, 271}), years_h));
        auto g = fx::rng(2024);
        double err_rand = 0.0;
        for (int done = 0; done < 50;) {
            const double a = fx::uniform(g, -0.1, 0.2), b = fx::uniform(g, -1e-3, 1e-3), s0 = fx::uniform(g, 10, 300);
            const auto m = anchor_trajectory(a, b, {2000, s0});
            const auto years = grid(2000, 2030);
            bool ok = true;
            for (double t : years) ok = ok && m.reciprocal(t) > 0 && 1.0 / m.reciprocal(t) < 1e4;
            if (!ok) continue;
            err_rand = std::max(err_rand, max_rel(integrate_rate_ode(a, b, {2000, s0}, years, 0.01), eval_trajectory(m, years)));
            ++done;
        }
        report(7, "ODE oracle equivalence", err_l <= 1e-6 && err_h <= 1e-5 && err_rand <= 1e-6,
               kv("logistic", err_l) + kv("hyperbolic", err_h) + kv("random50", err_rand));
    }
    {
        auto g = fx::rng(77);
        double err_exp = 0.0, err_poly = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const double rate = fx::uniform(g, -0.1, 0.2);
            const auto s = fx::exponential_series(fx::uniform(g, 1, 1000), rate, 1960, 2014);
            for (const auto& p : direct_growth_rate(s).points) err_exp = std::max(err_exp, std::abs(p.rate - rate));
            for (int d = 1; d <= 8; ++d) {
                for (const auto& p : refined_growth_rate(s, d).points) err_exp = std::max(err_exp, std::abs(p.rate - rate));
            }
            const int true_degree = 1 + trial % 6;
            std::vector<double> c(static_cast<std::size_t>(true_degree) + 1);
            for (auto& v : c) v = fx::uniform(g, -0.5, 0.5);
            auto poly = [&](double t, bool derivative) {
                const double u = (t - 1987.0) / 27.0;
                double acc = 0.0, pw = 1.0;
                for (std::size_t k = derivative ? 1 : 0; k < c.size(); ++k) {
                    acc += (derivative ? static_cast<double>(k) : 1.0) * c[k] * pw;
                    pw *= u;
                }
                return derivative ? acc / 27.0 : acc;
            };
            const auto lp = fx::sample([&](double t) { return std::exp(poly(t, false)); }, 1960, 2014);
            for (int d = true_degree; d <= 8; ++d) {
                for (const auto& p : refined_growth_rate(lp, d).points) {
                    err_poly = std::max(err_poly, std::abs(p.rate - poly(p.year, true)));
                }
            }
        }
        report(8, "rate estimator exactness", err_exp <= 1e-9 && err_poly <= 1e-9,
               kv("exponential", err_exp) + kv("log_polynomial", err_poly));
    }
    {
        auto g = fx::rng(99);
        double unit_rate = 0.0, shift_rate = 0.0, fit_scale = 0.0, traj_unit = 0.0, reanchor = 0.0, reanchor_ts = 0.0;
        const auto d0 = direct_growth_rate(greece);
        const auto r0 = refined_growth_rate(greece, kDefaultDegree);
        const auto f0 = fit_linear_rate_on_size(phase_series(greece, r0), r.descending.fit.window);
        int instances = 0;
        for (; instances < 25; ++instances) {
            const double k = std::exp(fx::uniform(g, -8, 8));
            const double shift = std::round(fx::uniform(g, -300, 300));
            auto scaled = greece, shifted = greece;
            for (auto& p : scaled.points) p.value *= k;
            for (auto& p : shifted.points) p.year += shift;
            const auto ds = direct_growth_rate(scaled), rs = refined_growth_rate(scaled, kDefaultDegree);
            const auto dt = direct_growth_rate(shifted), rt = refined_growth_rate(shifted, kDefaultDegree);
            for (std::size_t i = 0; i < greece.size(); ++i) {
                unit_rate = std::max({unit_rate, std::abs(ds.points[i].rate - d0.points[i].rate),
                                      std::abs(rs.points[i].rate - r0.points[i].rate)});
                shift_rate = std::max({shift_rate, std::abs(dt.points[i].rate - d0.points[i].rate),
                                       std::abs(rt.points[i].rate - r0.points[i].rate)});
            }
            const auto fk = fit_linear_rate_on_size(phase_series(scaled, rs), r.descending.fit.window);
            fit_scale = std::max({fit_scale, fx::rel_diff(fk.b * k, f0.b), std::abs(fk.a - f0.a)});

            const double a = fx::uniform(g, -0.1, 0.15), b = fx::uniform(g, -1e-3, 1e-3);
            const auto m = anchor_trajectory(a, b, {2000, fx::uniform(g, 20, 200)});
            const auto mk = anchor_trajectory(a, b / k, {2000, m.anchor_size() * k});
            const double t1 = fx::uniform(g, 1990, 2010);
            const bool t1_valid = m.reciprocal(t1) > 0;
            const auto m2 = t1_valid ? anchor_trajectory(a, b, {t1, eval_trajectory(m, t1)}) : m;
            for (double t = 1990; t <= 2010; t += 1) {
                if (!(m.reciprocal(t) > 1e-6 * m.inv_anchor)) continue;
                traj_unit = std::max(traj_unit, fx::rel_diff(eval_trajectory(mk, t), k * eval_trajectory(m, t)));
                reanchor = std::max(reanchor, fx::rel_diff(eval_trajectory(m2, t), eval_trajectory(m, t)));
            }
            const auto ts1 = singularity_time(m), ts2 = singularity_time(m2);
            if (ts1 && ts2) reanchor_ts = std::max(reanchor_ts, std::abs(*ts1 - *ts2));
        }
        const bool ok = instances >= 20 && unit_rate <= 1e-10 && shift_rate <= 1e-10 && fit_scale <= 1e-10 &&
                        traj_unit <= 1e-12 && reanchor <= 1e-9 && reanchor_ts <= 1e-6;
        report(9, "invariance suite", ok,
               kv("n", instances) + kv("unit", unit_rate) + kv("shift", shift_rate) + kv("fit_scale", fit_scale) +
                   kv("traj_unit", traj_unit) + kv("reanchor", reanchor) + kv("reanchor_ts", reanchor_ts));
    }
    {
        const auto base = fs::temp_directory_path() / "growthdx_acceptance";
        fs::remove_all(base);
        RunConfig cfg;
        cfg.input = greece_path;
        cfg.plots = false;
        cfg.out_dir = (base / "a").string();
        std::ostringstream err;
        const int rc1 = cmd_report(cfg, err);
        cfg.out_dir = (base / "b").string();
        const int rc2 = cmd_report(cfg, err);
        const auto ja = slurp(base / "a" / "report.json"), jb = slurp(base / "b" / "report.json");
        const bool identical = rc1 == 0 && rc2 == 0 && !ja.empty() && ja == jb;

        bool flags = true;
        for (auto f : {WarningFlag::RegimeFlip, WarningFlag::LinearAscent, WarningFlag::SingularityProximity,
                       WarningFlag::ReversalLoop}) {
            flags = flags && r.has_flag(f);
        }
        const auto logistic = early_warning_report(fx::logistic_series(kPublishedDescA, kPublishedDescB, 1960, 44.7, 1960, 2014),
                                                   kDefaultDegree);
        const auto exponential = early_warning_report(fx::exponential_series(50.0, 0.05, 1960, 2010), kDefaultDegree);
        const bool quiet = logistic.flags.empty() && exponential.flags.empty();
        fs::remove_all(base);

        std::string flag_list;
        for (auto f : r.flags) flag_list += std::string(to_string(f)) + ",";
        report(10, "end-to-end determinism and flags", identical && flags && quiet,
               std::string("identical=") + (identical ? "yes" : "no") + " flags=" + flag_list +
                   " baselines_quiet=" + (quiet ? "yes" : "no") + (err.str().empty() ? "" : " err=" + err.str()));
    }

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
