#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "growthdx/diagnostics.hpp"

namespace growthdx {

namespace detail {

inline nlohmann::ordered_json fit_json(const LinearRateModel& m) {
    return {{"a", m.a},
            {"b", m.b},
            {"a_stderr", m.a_stderr},
            {"b_stderr", m.b_stderr},
            {"r2", m.r_squared},
            {"window", {m.window.first, m.window.last}},
            {"n_points", m.n_points}};
}

inline nlohmann::ordered_json opt_json(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace detail

/// report.json document. Key order is fixed; doubles are written in shortest round-trip form.
inline nlohmann::ordered_json to_json(const WarningReport& r) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["series"] = r.series_name;
    j["unit"] = r.unit;
    j["degree"] = r.degree;
    j["peak"] = {{"year", r.peak.year}, {"size", r.peak.size}};
    j["breakpoint_year"] = r.breakpoint_year;
    j["descending_fit"] = detail::fit_json(r.descending.fit);
    j["ascending_fit"] = r.ascending ? detail::fit_json(r.ascending->fit) : ordered_json(nullptr);
    j["regimes"] = {{"descending", to_string(r.descending.regime.kind)},
                    {"ascending", r.ascending ? ordered_json(to_string(r.ascending->regime.kind))
                                              : ordered_json(nullptr)}};
    j["asymptote"] = detail::opt_json(r.asymptote);
    j["singularity_year"] = detail::opt_json(r.singularity_year);
    j["years_to_singularity_at_data_end"] = detail::opt_json(r.years_to_singularity_at_data_end);
    j["rate_cycle"] = {{"fold_decrease", detail::opt_json(r.rate_cycle.fold_decrease)},
                       {"fold_increase", detail::opt_json(r.rate_cycle.fold_increase)},
                       {"min", r.rate_cycle.min},
                       {"year_of_min", r.rate_cycle.year_of_min},
                       {"max_before_min", r.rate_cycle.max_before_min},
                       {"max_after_min", r.rate_cycle.max_after_min}};
    j["reversal_points"] = r.reversal_points;
    j["instability_sign_changes"] = r.instability_sign_changes;
    auto flags = ordered_json::array();
    for (auto f : r.flags) flags.push_back(to_string(f));
    j["flags"] = std::move(flags);
    j["narrative"] = r.narrative;
    return j;
}

}  // namespace growthdx
