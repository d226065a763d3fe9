#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "zeroloss/errors.hpp"
#include "zeroloss/textio.hpp"

namespace zeroloss {
namespace svgplot {

struct Series {
    std::string label;
    std::string color = "#1f77b4";
    bool draw_line = true;
    bool draw_markers = false;
    char marker = 'x'; // 'x' or 'o'
    std::vector<std::pair<double, double>> points;
};

inline std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

/// Dependency-free 800x600 line/scatter plot with linear or log10 axes.
/// Non-finite points (and non-positive ones on log axes) are skipped.
struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    int width = 800;
    int height = 600;
    std::vector<Series> series;

    void add(Series s) { series.push_back(std::move(s)); }

    void render(std::ostream& out) const {
        const double margin_left = 70, margin_right = 20, margin_top = 45,
                     margin_bottom = 55;
        const double plot_w = width - margin_left - margin_right;
        const double plot_h = height - margin_top - margin_bottom;

        auto usable = [&](double x, double y) {
            if (!std::isfinite(x) || !std::isfinite(y)) return false;
            if (log_x && !(x > 0.0)) return false;
            if (log_y && !(y > 0.0)) return false;
            return true;
        };

        double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
        double y_lo = x_lo, y_hi = -x_lo;
        for (const auto& s : series)
            for (const auto& [x, y] : s.points) {
                if (!usable(x, y)) continue;
                const double xv = log_x ? std::log10(x) : x;
                const double yv = log_y ? std::log10(y) : y;
                x_lo = std::min(x_lo, xv);
                x_hi = std::max(x_hi, xv);
                y_lo = std::min(y_lo, yv);
                y_hi = std::max(y_hi, yv);
            }
        if (!(x_lo <= x_hi)) { x_lo = 0; x_hi = 1; }
        if (!(y_lo <= y_hi)) { y_lo = 0; y_hi = 1; }
        if (x_hi == x_lo) { x_hi += 0.5; x_lo -= 0.5; }
        if (y_hi == y_lo) { y_hi += 0.5; y_lo -= 0.5; }
        const double x_pad = 0.04 * (x_hi - x_lo), y_pad = 0.04 * (y_hi - y_lo);
        x_lo -= x_pad; x_hi += x_pad;
        y_lo -= y_pad; y_hi += y_pad;

        auto px = [&](double x) {
            const double v = log_x ? std::log10(x) : x;
            return margin_left + (v - x_lo) / (x_hi - x_lo) * plot_w;
        };
        auto py = [&](double y) {
            const double v = log_y ? std::log10(y) : y;
            return margin_top + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h;
        };

        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
            << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
            << height << "\">\n";
        out << "<rect width=\"" << width << "\" height=\"" << height
            << "\" fill=\"white\"/>\n";
        out << "<rect x=\"" << margin_left << "\" y=\"" << margin_top
            << "\" width=\"" << plot_w << "\" height=\"" << plot_h
            << "\" fill=\"none\" stroke=\"#333\"/>\n";

        // Ticks: nice 1-2-5 steps on linear axes, decades on log axes.
        auto nice_ticks = [](double lo, double hi) {
            std::vector<double> ticks;
            const double raw = (hi - lo) / 6.0;
            const double mag = std::pow(10.0, std::floor(std::log10(raw)));
            double step = mag;
            for (double mult : {1.0, 2.0, 5.0, 10.0})
                if (raw <= mult * mag) { step = mult * mag; break; }
            const double first = std::ceil(lo / step) * step;
            for (double v = first; v <= hi + 1e-9 * step; v += step)
                ticks.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
            return ticks;
        };
        auto log_ticks = [](double lo, double hi) {
            std::vector<double> ticks;
            for (int k = static_cast<int>(std::floor(lo));
                 k <= static_cast<int>(std::ceil(hi)); ++k)
                if (k >= lo - 1e-9 && k <= hi + 1e-9)
                    ticks.push_back(static_cast<double>(k));
            return ticks;
        };

        const auto x_ticks = log_x ? log_ticks(x_lo, x_hi) : nice_ticks(x_lo, x_hi);
        const auto y_ticks = log_y ? log_ticks(y_lo, y_hi) : nice_ticks(y_lo, y_hi);
        for (double tx : x_ticks) {
            const double gx =
                margin_left + (tx - x_lo) / (x_hi - x_lo) * plot_w;
            out << "<line x1=\"" << gx << "\" y1=\"" << margin_top << "\" x2=\""
                << gx << "\" y2=\"" << margin_top + plot_h
                << "\" stroke=\"#ddd\"/>\n";
            const std::string label =
                log_x ? "1e" + format_double(tx) : format_double(tx);
            out << "<text x=\"" << gx << "\" y=\"" << margin_top + plot_h + 18
                << "\" font-size=\"11\" text-anchor=\"middle\">" << label
                << "</text>\n";
        }
        for (double ty : y_ticks) {
            const double gy =
                margin_top + plot_h - (ty - y_lo) / (y_hi - y_lo) * plot_h;
            out << "<line x1=\"" << margin_left << "\" y1=\"" << gy << "\" x2=\""
                << margin_left + plot_w << "\" y2=\"" << gy
                << "\" stroke=\"#ddd\"/>\n";
            const std::string label =
                log_y ? "1e" + format_double(ty) : format_double(ty);
            out << "<text x=\"" << margin_left - 6 << "\" y=\"" << gy + 4
                << "\" font-size=\"11\" text-anchor=\"end\">" << label
                << "</text>\n";
        }

        for (const auto& s : series) {
            if (s.draw_line) {
                std::string path;
                bool pen_down = false;
                for (const auto& [x, y] : s.points) {
                    if (!usable(x, y)) { pen_down = false; continue; }
                    path += pen_down ? "L" : "M";
                    path += format_double(px(x)) + " " + format_double(py(y));
                    pen_down = true;
                }
                if (!path.empty())
                    out << "<path d=\"" << path << "\" fill=\"none\" stroke=\""
                        << s.color << "\" stroke-width=\"1.5\"/>\n";
            }
            if (s.draw_markers) {
                for (const auto& [x, y] : s.points) {
                    if (!usable(x, y)) continue;
                    const double cx = px(x), cy = py(y);
                    if (s.marker == 'o') {
                        out << "<circle cx=\"" << cx << "\" cy=\"" << cy
                            << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
                    } else {
                        out << "<path d=\"M" << cx - 3 << ' ' << cy - 3 << "L"
                            << cx + 3 << ' ' << cy + 3 << "M" << cx - 3 << ' '
                            << cy + 3 << "L" << cx + 3 << ' ' << cy - 3
                            << "\" stroke=\"" << s.color << "\"/>\n";
                    }
                }
            }
        }

        // Legend, top right inside the frame.
        double ly = margin_top + 16;
        for (const auto& s : series) {
            if (s.label.empty()) continue;
            const double lx = margin_left + plot_w - 160;
            out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\""
                << lx + 22 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color
                << "\" stroke-width=\"2\"/>\n";
            out << "<text x=\"" << lx + 28 << "\" y=\"" << ly
                << "\" font-size=\"11\">" << escape_xml(s.label) << "</text>\n";
            ly += 16;
        }

        if (!title.empty())
            out << "<text x=\"" << width / 2 << "\" y=\"24\" font-size=\"15\" "
                   "text-anchor=\"middle\">"
                << escape_xml(title) << "</text>\n";
        if (!x_label.empty())
            out << "<text x=\"" << margin_left + plot_w / 2 << "\" y=\""
                << height - 12 << "\" font-size=\"12\" text-anchor=\"middle\">"
                << escape_xml(x_label) << "</text>\n";
        if (!y_label.empty())
            out << "<text x=\"16\" y=\"" << margin_top + plot_h / 2
                << "\" font-size=\"12\" text-anchor=\"middle\" "
                   "transform=\"rotate(-90 16 "
                << margin_top + plot_h / 2 << ")\">" << escape_xml(y_label)
                << "</text>\n";
        out << "</svg>\n";
    }
};

} // namespace svgplot
} // namespace zeroloss
