#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "affect/csv.hpp"

namespace affect::svg {

struct Marker {
    double x{0.0};
    double y{0.0};
    std::string color;  // "#rrggbb"
    std::string title;  // hover text
};

struct Axes {
    double x_min{-2.0}, x_max{2.0};
    double y_min{-2.0}, y_max{2.0};
    std::string x_label;
    std::string y_label;
};

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

// Blue (-2) to red (+2).
inline std::string diverging_color(double v, double lo = -2.0, double hi = 2.0) {
    const double t = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
    const int r = static_cast<int>(std::lround(255.0 * t));
    const int b = static_cast<int>(std::lround(255.0 * (1.0 - t)));
    return fmt::format("#{:02x}00{:02x}", r, b);
}

inline std::string category_color(std::size_t i) {
    static const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e",
                                     "#e6ab02", "#a6761d", "#666666"};
    return kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
}

inline Axes fit_axes(const std::vector<Marker>& ms, std::string x_label, std::string y_label) {
    Axes a{0, 0, 0, 0, std::move(x_label), std::move(y_label)};
    if (ms.empty()) return Axes{-1, 1, -1, 1, a.x_label, a.y_label};
    a.x_min = a.x_max = ms[0].x;
    a.y_min = a.y_max = ms[0].y;
    for (const auto& m : ms) {
        a.x_min = std::min(a.x_min, m.x);
        a.x_max = std::max(a.x_max, m.x);
        a.y_min = std::min(a.y_min, m.y);
        a.y_max = std::max(a.y_max, m.y);
    }
    const double px = std::max(1e-9, (a.x_max - a.x_min) * 0.05), py = std::max(1e-9, (a.y_max - a.y_min) * 0.05);
    a.x_min -= px;
    a.x_max += px;
    a.y_min -= py;
    a.y_max += py;
    return a;
}

// Fixed-size scatter plot; every coordinate printed at fixed precision so output is
// byte-stable.
inline std::string scatter(const std::string& title, const Axes& axes, const std::vector<Marker>& markers) {
    constexpr double W = 640, H = 640, M = 60;
    auto sx = [&](double x) { return M + (x - axes.x_min) / (axes.x_max - axes.x_min) * (W - 2 * M); };
    auto sy = [&](double y) { return H - M - (y - axes.y_min) / (axes.y_max - axes.y_min) * (H - 2 * M); };
    auto n = [](double v) { return csv::number(v, 2); };
    std::string s;
    s += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
                     W, H, W, H);
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>\n",
                     n(W / 2), escape(title));
    s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", n(M), n(M),
                     n(W - 2 * M), n(H - 2 * M));
    if (axes.x_min < 0 && axes.x_max > 0)
        s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#cccccc\"/>\n", n(sx(0)), n(M),
                         n(H - M));
    if (axes.y_min < 0 && axes.y_max > 0)
        s += fmt::format("<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"#cccccc\"/>\n", n(sy(0)), n(M),
                         n(W - M));
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
                     n(W / 2), n(H - 18), escape(axes.x_label));
    s += fmt::format(
        "<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        "transform=\"rotate(-90 18 {0})\">{1}</text>\n",
        n(H / 2), escape(axes.y_label));
    for (double t : {axes.x_min, axes.x_max})
        s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n",
                         n(sx(t)), n(H - M + 14), n(t));
    for (double t : {axes.y_min, axes.y_max})
        s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n",
                         n(M - 4), n(sy(t) + 3), n(t));
    for (const auto& m : markers)
        s += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{}\" fill-opacity=\"0.8\"><title>{}</title></circle>\n",
                         n(sx(m.x)), n(sy(m.y)), m.color, escape(m.title));
    s += "</svg>\n";
    return s;
}

}  // namespace affect::svg
