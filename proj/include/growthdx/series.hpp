#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

namespace growthdx {

/// One observation of the growing quantity.
struct SeriesPoint {
    double year = 0.0;
    double value = 0.0;

    friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

/**
 * @brief Calendar-year indexed positive values (GDP in billions of constant dollars).
 *
 * A plain value type. The ingest path guarantees the invariants (strictly
 * increasing years, positive values, at least kMinSeriesPoints points);
 * validate_series() checks them for series built by hand.
 */
struct TimeSeries {
    std::string name;
    std::string unit;
    std::vector<SeriesPoint> points;

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
    [[nodiscard]] bool empty() const noexcept { return points.empty(); }

    [[nodiscard]] std::vector<double> years() const {
        std::vector<double> out;
        out.reserve(points.size());
        for (const auto& p : points) out.push_back(p.year);
        return out;
    }

    [[nodiscard]] std::vector<double> values() const {
        std::vector<double> out;
        out.reserve(points.size());
        for (const auto& p : points) out.push_back(p.value);
        return out;
    }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;
};

inline constexpr std::size_t kMinSeriesPoints = 5;

enum class IssueKind {
    TooFewPoints,
    NonIncreasingYear,
    DuplicateYear,
    NonPositiveValue,
    NonFiniteValue,
    GapYears,
};

enum class Severity { Error, Warning };

inline const char* to_string(IssueKind kind) {
    switch (kind) {
        case IssueKind::TooFewPoints: return "too_few_points";
        case IssueKind::NonIncreasingYear: return "non_increasing_year";
        case IssueKind::DuplicateYear: return "duplicate_year";
        case IssueKind::NonPositiveValue: return "non_positive_value";
        case IssueKind::NonFiniteValue: return "non_finite_value";
        case IssueKind::GapYears: return "gap_years";
    }
    return "unknown";
}

struct ValidationIssue {
    std::size_t row = 0;  // index into TimeSeries::points
    IssueKind kind = IssueKind::TooFewPoints;
    Severity severity = Severity::Error;
    std::string message;
};

/// ok is false iff at least one issue has Error severity; gaps are warnings.
struct ValidationReport {
    bool ok = true;
    std::vector<ValidationIssue> issues;

    [[nodiscard]] std::size_t error_count() const {
        return static_cast<std::size_t>(std::count_if(issues.begin(), issues.end(), [](const auto& i) {
            return i.severity == Severity::Error;
        }));
    }
    [[nodiscard]] std::size_t warning_count() const { return issues.size() - error_count(); }
};

inline ValidationReport validate_series(const TimeSeries& series) {
    ValidationReport report;
    auto add = [&](std::size_t row, IssueKind kind, Severity sev, std::string msg) {
        report.issues.push_back({row, kind, sev, std::move(msg)});
        if (sev == Severity::Error) report.ok = false;
    };

    const auto& pts = series.points;
    if (pts.size() < kMinSeriesPoints) {
        add(0, IssueKind::TooFewPoints, Severity::Error,
            "series has " + std::to_string(pts.size()) + " points; at least " +
                std::to_string(kMinSeriesPoints) + " are required");
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        if (!std::isfinite(p.year) || !std::isfinite(p.value)) {
            add(i, IssueKind::NonFiniteValue, Severity::Error, "non-finite year or value");
            continue;
        }
        if (p.value <= 0.0) {
            add(i, IssueKind::NonPositiveValue, Severity::Error,
                "value " + std::to_string(p.value) + " is not positive");
        }
        if (i == 0) continue;
        const double prev = pts[i - 1].year;
        if (p.year == prev) {
            add(i, IssueKind::DuplicateYear, Severity::Error, "duplicate year " + std::to_string(p.year));
        } else if (p.year < prev) {
            add(i, IssueKind::NonIncreasingYear, Severity::Error, "year decreases from previous point");
        } else if (p.year - prev > 1.0 + 1e-9 && std::floor(p.year) == p.year && std::floor(prev) == prev) {
            add(i, IssueKind::GapYears, Severity::Warning,
                std::to_string(static_cast<long long>(p.year - prev - 1.0)) + " missing year(s) before " +
                    std::to_string(static_cast<long long>(p.year)));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// CSV ingest

/// Ingest failure. row is the 1-based line number in the source text (0 when not tied to a line).
class SeriesError : public std::runtime_error {
public:
    enum class Kind { FileNotFound, MalformedCsv, NonNumeric, DuplicateYear, NonPositive, TooFewPoints };

    SeriesError(Kind kind, std::size_t row, const std::string& what)
        : std::runtime_error(row ? "line " + std::to_string(row) + ": " + what : what), kind_(kind), row_(row) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t row() const noexcept { return row_; }

private:
    Kind kind_;
    std::size_t row_;
};

struct LoadOptions {
    std::string year_column = "year";
    std::string value_column = "value";
    std::string unit = "billions of 2005 USD";
    double scale = 1.0;
    std::string name;  // defaults to the file stem when empty
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::string_view unquote(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        else if (line[i] == ',' && !quoted) {
            out.push_back(unquote(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(unquote(line.substr(start)));
    return out;
}

inline bool parse_double(std::string_view text, double& out) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return false;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

/// Shortest text that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

}  // namespace detail

/// Parse CSV text into a sorted, validated TimeSeries.
inline TimeSeries parse_series(std::istream& in, const LoadOptions& options = {}) {
    using K = SeriesError::Kind;
    std::string line;
    std::size_t line_no = 0;
    std::ptrdiff_t year_idx = -1, value_idx = -1;
    std::size_t n_fields = 0;

    struct Row {
        SeriesPoint point;
        std::size_t line;
    };
    std::vector<Row> rows;

    while (std::getline(in, line)) {
        ++line_no;
        const auto body = detail::trim(line);
        if (body.empty() || body.front() == '#') continue;
        if (line_no == 1 && body.size() >= 3 && body.substr(0, 3) == "\xEF\xBB\xBF") {
            line.erase(0, 3);
        }
        const auto fields = detail::split_fields(detail::trim(line));

        if (year_idx < 0) {
            n_fields = fields.size();
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] == options.year_column) year_idx = static_cast<std::ptrdiff_t>(i);
                if (fields[i] == options.value_column) value_idx = static_cast<std::ptrdiff_t>(i);
            }
            if (year_idx < 0 || value_idx < 0) {
                throw SeriesError(K::MalformedCsv, line_no,
                                  "header must contain columns '" + options.year_column + "' and '" +
                                      options.value_column + "'");
            }
            continue;
        }

        if (fields.size() != n_fields) {
            throw SeriesError(K::MalformedCsv, line_no,
                              "expected " + std::to_string(n_fields) + " fields, found " +
                                  std::to_string(fields.size()));
        }
        Row row{{}, line_no};
        if (!detail::parse_double(fields[static_cast<std::size_t>(year_idx)], row.point.year)) {
            throw SeriesError(K::NonNumeric, line_no,
                              "non-numeric year '" + std::string(fields[static_cast<std::size_t>(year_idx)]) + "'");
        }
        double raw = 0.0;
        if (!detail::parse_double(fields[static_cast<std::size_t>(value_idx)], raw)) {
            throw SeriesError(K::NonNumeric, line_no,
                              "non-numeric value '" + std::string(fields[static_cast<std::size_t>(value_idx)]) +
                                  "'");
        }
        row.point.value = raw * options.scale;
        if (!(row.point.value > 0.0)) {
            throw SeriesError(K::NonPositive, line_no,
                              "value " + detail::format_double(row.point.value) + " is not positive after scaling");
        }
        rows.push_back(row);
    }
    if (year_idx < 0) throw SeriesError(K::MalformedCsv, 0, "missing header row");

    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.point.year < b.point.year; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].point.year == rows[i - 1].point.year) {
            throw SeriesError(K::DuplicateYear, std::max(rows[i].line, rows[i - 1].line),
                              "duplicate year " + detail::format_double(rows[i].point.year));
        }
    }
    if (rows.size() < kMinSeriesPoints) {
        throw SeriesError(K::TooFewPoints, 0,
                          "too few points: " + std::to_string(rows.size()) + " (need at least " +
                              std::to_string(kMinSeriesPoints) + ")");
    }

    TimeSeries series;
    series.name = options.name;
    series.unit = options.unit;
    series.points.reserve(rows.size());
    for (const auto& r : rows) series.points.push_back(r.point);
    return series;
}

inline TimeSeries parse_series(std::string_view text, const LoadOptions& options = {}) {
    std::istringstream in{std::string(text)};
    return parse_series(in, options);
}

inline TimeSeries load_series(const std::string& path, const LoadOptions& options = {}) {
    std::ifstream in(path);
    if (!in) throw SeriesError(SeriesError::Kind::FileNotFound, 0, "cannot open '" + path + "'");
    LoadOptions opts = options;
    if (opts.name.empty()) {
        auto stem = path.substr(path.find_last_of("/\\") + 1);
        if (auto dot = stem.rfind('.'); dot != std::string::npos && dot > 0) stem.erase(dot);
        opts.name = stem;
    }
    return parse_series(in, opts);
}

/// Writes "year,value" rows with round-trip precision.
inline void write_series_csv(std::ostream& out, const TimeSeries& series, const std::string& year_column = "year",
                             const std::string& value_column = "value") {
    out << year_column << ',' << value_column << '\n';
    for (const auto& p : series.points) {
        out << detail::format_double(p.year) << ',' << detail::format_double(p.value) << '\n';
    }
}

}  // namespace growthdx
