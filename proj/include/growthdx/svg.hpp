#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace growthdx::svg {

inline std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Series {
    std::vector<std::pair<double, double>> xy;
    std::string label;
    std::string color = "#1f77b4";
    bool markers = false;  // points instead of a polyline
    bool dashed = false;
};

struct Marker {
    double at = 0.0;
    std::string label;
    bool vertical = true;
};

/// Line/scatter chart with linear axes. Non-finite samples break polylines.
class Plot {
public:
    Plot(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add(Series s) { series_.push_back(std::move(s)); }
    void add_marker(Marker m) { markers_.push_back(std::move(m)); }
    void set_y_limits(double lo, double hi) {
        y_lo_ = lo;
        y_hi_ = hi;
    }

    void write(std::ostream& out) const {
        double x0 = inf(), x1 = -inf(), y0 = inf(), y1 = -inf();
        for (const auto& s : series_) {
            for (auto [x, y] : s.xy) {
                if (!std::isfinite(x) || !std::isfinite(y)) continue;
                if (y_lo_ && (y < *y_lo_ || y > *y_hi_)) continue;
                x0 = std::min(x0, x);
                x1 = std::max(x1, x);
                y0 = std::min(y0, y);
                y1 = std::max(y1, y);
            }
        }
        for (const auto& m : markers_) {
            if (m.vertical) {
                x0 = std::min(x0, m.at);
                x1 = std::max(x1, m.at);
            } else {
                y0 = std::min(y0, m.at);
                y1 = std::max(y1, m.at);
            }
        }
        if (y_lo_) {
            y0 = *y_lo_;
            y1 = *y_hi_;
        }
        if (!(x0 < x1)) {
            x0 = (std::isfinite(x0) ? x0 : 0.0) - 1.0;
            x1 = x0 + 2.0;
        }
        if (!(y0 < y1)) {
            y0 = (std::isfinite(y0) ? y0 : 0.0) - 1.0;
            y1 = y0 + 2.0;
        }
        const auto xt = ticks(x0, x1), yt = ticks(y0, y1);
        x0 = std::min(x0, xt.front());
        x1 = std::max(x1, xt.back());
        y0 = std::min(y0, yt.front());
        y1 = std::max(y1, yt.back());

        auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); };
        auto py = [&](double y) { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); };

        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
            << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
            << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title_)
            << "</text>\n";

        out << "<g stroke=\"#ccc\" stroke-width=\"0.5\">\n";
        for (double t : xt) line(out, px(t), py(y0), px(t), py(y1));
        for (double t : yt) line(out, px(x0), py(t), px(x1), py(t));
        out << "</g>\n<g stroke=\"black\" stroke-width=\"1\">\n";
        line(out, px(x0), py(y0), px(x1), py(y0));
        line(out, px(x0), py(y0), px(x0), py(y1));
        out << "</g>\n";
        for (double t : xt) {
            out << "<text x=\"" << num(px(t)) << "\" y=\"" << num(py(y0) + 16) << "\" text-anchor=\"middle\">"
                << label(t) << "</text>\n";
        }
        for (double t : yt) {
            out << "<text x=\"" << num(px(x0) - 6) << "\" y=\"" << num(py(t) + 4) << "\" text-anchor=\"end\">"
                << label(t) << "</text>\n";
        }
        out << "<text x=\"" << num((px(x0) + px(x1)) / 2) << "\" y=\"" << kHeight - 12
            << "\" text-anchor=\"middle\">" << escape(x_label_) << "</text>\n"
            << "<text transform=\"translate(16," << num((py(y0) + py(y1)) / 2)
            << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label_) << "</text>\n";

        for (const auto& s : series_) {
            if (s.markers) {
                out << "<g fill=\"" << s.color << "\">\n";
                for (auto [x, y] : s.xy) {
                    if (!visible(x, y, y0, y1)) continue;
                    out << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"2.5\"/>\n";
                }
                out << "</g>\n";
                continue;
            }
            std::string pts;
            auto flush = [&] {
                if (pts.empty()) return;
                out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
                    << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"" << pts << "\"/>\n";
                pts.clear();
            };
            for (auto [x, y] : s.xy) {
                if (!visible(x, y, y0, y1)) {
                    flush();
                    continue;
                }
                if (!pts.empty()) pts += ' ';
                pts += num(px(x)) + "," + num(py(y));
            }
            flush();
        }

        for (const auto& m : markers_) {
            if (m.vertical) {
                out << "<line x1=\"" << num(px(m.at)) << "\" y1=\"" << num(py(y0)) << "\" x2=\"" << num(px(m.at))
                    << "\" y2=\"" << num(py(y1)) << "\" stroke=\"#d62728\" stroke-dasharray=\"3,3\"/>\n"
                    << "<text x=\"" << num(px(m.at) + 4) << "\" y=\"" << num(py(y1) + 12) << "\" fill=\"#d62728\">"
                    << escape(m.label) << "</text>\n";
            } else {
                out << "<line x1=\"" << num(px(x0)) << "\" y1=\"" << num(py(m.at)) << "\" x2=\"" << num(px(x1))
                    << "\" y2=\"" << num(py(m.at)) << "\" stroke=\"#d62728\" stroke-dasharray=\"3,3\"/>\n"
                    << "<text x=\"" << num(px(x0) + 4) << "\" y=\"" << num(py(m.at) - 4) << "\" fill=\"#d62728\">"
                    << escape(m.label) << "</text>\n";
            }
        }

        double ly = kTop + 4;
        for (const auto& s : series_) {
            if (s.label.empty()) continue;
            const double lx = kWidth - kRight - 190;
            out << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly) << "\" width=\"12\" height=\"3\" fill=\"" << s.color
                << "\"/>\n<text x=\"" << num(lx + 18) << "\" y=\"" << num(ly + 5) << "\">" << escape(s.label)
                << "</text>\n";
            ly += 16;
        }
        out << "</svg>\n";
    }

private:
    static constexpr int kWidth = 760, kHeight = 480, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

    static double inf() { return std::numeric_limits<double>::infinity(); }

    bool visible(double x, double y, double y0, double y1) const {
        return std::isfinite(x) && std::isfinite(y) && y >= y0 && y <= y1;
    }

    static std::string num(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return buf;
    }

    static std::string label(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
        return buf;
    }

    static void line(std::ostream& out, double x1, double y1, double x2, double y2) {
        out << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
            << "\"/>\n";
    }

    // 1-2-5 tick sequence covering [lo, hi] with ~6 ticks
    static std::vector<double> ticks(double lo, double hi) {
        const double raw = (hi - lo) / 6.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double f : {1.0, 2.0, 5.0, 10.0}) {
            step = f * mag;
            if (step >= raw) break;
        }
        std::vector<double> out;
        for (double t = std::floor(lo / step) * step; t <= hi + 0.5 * step; t += step) out.push_back(t);
        if (out.size() < 2) out.push_back(out.back() + step);
        return out;
    }

    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
    std::vector<Marker> markers_;
    std::optional<double> y_lo_, y_hi_;
};

}  // namespace growthdx::svg
