#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "growthdx/diagnostics.hpp"
#include "test_support.hpp"

using namespace growthdx;

namespace {

const TimeSeries& greece() {
    static const TimeSeries s = load_series(std::string(GROWTHDX_DATA_DIR) + "/greece_gdp.csv");
    return s;
}

std::vector<std::string> names(const WarningReport& r) {
    std::vector<std::string> out;
    for (auto f : r.flags) out.emplace_back(to_string(f));
    return out;
}

const std::vector<std::string> kGreeceFlags{"RATE_DECLINE_TOO_FAST", "REGIME_FLIP", "LINEAR_ASCENT",
                                            "SINGULARITY_PROXIMITY", "REVERSAL_LOOP"};

}  // namespace

TEST(EarlyWarningReport, GreeceTripsEveryHeadlineFlag) {
    const auto r = early_warning_report(greece(), 3);
    EXPECT_EQ(names(r), kGreeceFlags);
    EXPECT_EQ(r.peak.year, 2007.0);
    EXPECT_EQ(r.peak.size, 271.0);
    EXPECT_EQ(r.descending.regime.kind, RegimeKind::Logistic);
    ASSERT_TRUE(r.ascending);
    EXPECT_EQ(r.ascending->regime.kind, RegimeKind::PseudoHyperbolic);
    ASSERT_TRUE(r.singularity_year);
    EXPECT_GT(*r.singularity_year, 2014.0);
    EXPECT_NEAR(*r.years_to_singularity_at_data_end, *r.singularity_year - 2014.0, 1e-12);
    ASSERT_TRUE(r.asymptote);
    EXPECT_NEAR(*r.asymptote, logistic_asymptote(r.descending.fit), 1e-12);
    EXPECT_GE(r.reversal_points, 2u);
    EXPECT_NE(r.narrative.find("REVERSAL_LOOP"), std::string::npos);
    // the ascending trajectory runs through the peak
    EXPECT_NEAR(eval_trajectory(*r.ascending_trajectory, 2007.0), 271.0, 1e-9);
}

TEST(EarlyWarningReport, SegmentsAreOrderedAndExcludeEndpoints) {
    const auto r = early_warning_report(greece(), 3);
    EXPECT_GT(r.descending.fit.window.first, 1960.0);
    EXPECT_LT(r.descending.fit.window.last, r.breakpoint_year);
    EXPECT_EQ(r.second_segment.fit.window.first, r.breakpoint_year);
    EXPECT_LT(r.second_segment.fit.window.last, 2007.0);
}

TEST(EarlyWarningReport, ExplicitSegmentsReproduceAutoDetection) {
    const auto automatic = early_warning_report(greece(), 3);
    const SegmentOverride o{{automatic.descending.fit.window.first, automatic.descending.fit.window.last},
                            {automatic.second_segment.fit.window.first, automatic.second_segment.fit.window.last}};
    const auto manual = early_warning_report(greece(), 3, {}, o);
    EXPECT_EQ(manual.descending.fit.a, automatic.descending.fit.a);
    EXPECT_EQ(manual.ascending->fit.b, automatic.ascending->fit.b);
    EXPECT_EQ(manual.flags, automatic.flags);
}

TEST(EarlyWarningReport, LogisticBaselineIsQuiet) {
    const auto s = fixture::logistic_series(1.553e-1, -9.112e-4, 1960, 44.7, 1960, 2014);
    const auto r = early_warning_report(s, 3);
    EXPECT_TRUE(r.flags.empty()) << r.narrative;
    EXPECT_FALSE(r.singularity_year);
    EXPECT_FALSE(r.ascending);
    EXPECT_EQ(r.descending.regime.kind, RegimeKind::Logistic);
    ASSERT_TRUE(r.asymptote);
    EXPECT_NEAR(*r.asymptote, 170.43, 170.43 * 0.05);
}

TEST(EarlyWarningReport, ExponentialBaselineIsQuiet) {
    const auto s = fixture::exponential_series(50.0, 0.05, 1960, 2010);
    const auto r = early_warning_report(s, 3);
    EXPECT_TRUE(r.flags.empty()) << r.narrative;
    EXPECT_EQ(r.descending.regime.kind, RegimeKind::Exponential);
    EXPECT_EQ(r.second_segment.regime.kind, RegimeKind::Exponential);
    EXPECT_FALSE(r.singularity_year);
    EXPECT_FALSE(r.asymptote);
}

TEST(EarlyWarningReport, RejectsInvalidInput) {
    EXPECT_THROW(early_warning_report(TimeSeries{"s", "u", {{0, 1}, {1, 2}, {2, 3}}}, 3), std::invalid_argument);
    WarningThresholds bad;
    bad.fold_decrease_alarm = 0.0;
    EXPECT_THROW(early_warning_report(greece(), 3, bad), std::invalid_argument);
    // maximum too early for the pre-collapse fit
    const auto falling = fixture::exponential_series(100.0, -0.03, 1960, 2000);
    EXPECT_THROW(early_warning_report(falling, 3), std::invalid_argument);
}

TEST(DiagnosticsProperties, Deterministic) {
    const auto a = early_warning_report(greece(), 3), b = early_warning_report(greece(), 3);
    EXPECT_EQ(a.narrative, b.narrative);
    EXPECT_EQ(a.flags, b.flags);
    EXPECT_EQ(a.singularity_year, b.singularity_year);
    EXPECT_EQ(a.descending.fit.b, b.descending.fit.b);
}

TEST(DiagnosticsProperties, FlagsMonotoneInThresholds) {
    bool prev_decline = true;
    for (double alarm = 1.0; alarm <= 30.0; alarm += 0.5) {
        WarningThresholds t;
        t.fold_decrease_alarm = alarm;
        const bool on = early_warning_report(greece(), 3, t).has_flag(WarningFlag::RateDeclineTooFast);
        EXPECT_FALSE(on && !prev_decline) << "flag reappeared at alarm " << alarm;
        prev_decline = on;
    }
    bool prev_near = false;
    for (double horizon = 0.5; horizon <= 30.0; horizon += 0.5) {
        WarningThresholds t;
        t.singularity_horizon_years = horizon;
        const bool on = early_warning_report(greece(), 3, t).has_flag(WarningFlag::SingularityProximity);
        EXPECT_FALSE(prev_near && !on) << "flag vanished at horizon " << horizon;
        prev_near = on;
    }
    EXPECT_TRUE(prev_near);
}

TEST(DiagnosticsProperties, RandomLogisticsNeverFlipOrDiverge) {
    auto g = fixture::rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = fixture::uniform(g, 0.05, 0.25), k = fixture::uniform(g, 50, 5000);
        const double s0 = k * fixture::uniform(g, 0.01, 0.49);
        const auto s = fixture::logistic_series(a, -a / k, 1960, s0, 1960, 2014);
        const auto r = early_warning_report(s, 3);
        EXPECT_FALSE(r.has_flag(WarningFlag::RegimeFlip)) << "a=" << a << " K=" << k << " S0=" << s0;
        EXPECT_FALSE(r.has_flag(WarningFlag::SingularityProximity)) << "a=" << a << " K=" << k << " S0=" << s0;
    }
}

TEST(DiagnosticsProperties, GreeceFlagsStableAcrossDegrees) {
    for (int degree = 3; degree <= 8; ++degree) {
        EXPECT_EQ(names(early_warning_report(greece(), degree)), kGreeceFlags) << "degree " << degree;
    }
}

TEST(ForecastScenarios, StopsAtDivergenceAndAddsContrast) {
    const auto traj = anchor_trajectory(-6.424e-2, 4.839e-4, {2007, 271});
    const auto rows = forecast_scenarios(greece(), traj, 11, 0.02);
    std::size_t hyper = 0, expo = 0;
    for (const auto& row : rows) {
        if (row.scenario == "pseudo_hyperbolic") {
            ++hyper;
            EXPECT_LT(row.year, 2017.48);
        } else if (row.scenario == "exponential") {
            ++expo;
        }
    }
    EXPECT_EQ(hyper, 10u);  // 2008..2017
    EXPECT_EQ(expo, 11u);
    const auto& marker = rows[hyper];
    EXPECT_EQ(marker.scenario, "pseudo_hyperbolic_divergence");
    EXPECT_NEAR(marker.year, 2017.48, 0.01);
    EXPECT_TRUE(std::isinf(marker.size));
    EXPECT_NEAR(rows[rows.size() - 2].size, 271.0 * std::exp(0.2), 1e-9);
    EXPECT_NEAR(rows[rows.size() - 2].size, 331.0, 0.01);
    EXPECT_THROW(forecast_scenarios(greece(), traj, 0, 0.02), std::invalid_argument);
}

TEST(ForecastScenarios, NoDivergenceWithinShortHorizon) {
    const auto traj = anchor_trajectory(-6.424e-2, 4.839e-4, {2007, 271});
    const auto rows = forecast_scenarios(greece(), traj, 5, 0.0);
    ASSERT_EQ(rows.size(), 10u);
    for (const auto& row : rows) EXPECT_TRUE(std::isfinite(row.size));
    EXPECT_EQ(rows[5].size, 271.0);
}
