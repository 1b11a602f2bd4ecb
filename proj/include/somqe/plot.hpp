#pragma once

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace somqe {

/// One plotted series: label plus y-values at x = 0, 1, 2, ...
struct PlotSeries {
    std::string label;
    std::vector<double> values;
};

namespace detail {

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                           "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

inline std::string fmt2(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string fmt_tick(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace detail

/// QE-vs-index line chart as a standalone SVG. Purely a function of its
/// input: fixed canvas, fixed palette, fixed numeric formatting, so equal
/// reports yield byte-equal files.
inline std::string render_svg(const std::vector<PlotSeries>& series,
                              const std::string& y_label = "quantization error") {
    if (series.empty()) throw std::invalid_argument("render_svg: no series");
    std::size_t n_max = 0;
    for (const auto& s : series) {
        if (s.values.empty()) throw std::invalid_argument("render_svg: series \"" + s.label + "\" is empty");
        n_max = std::max(n_max, s.values.size());
    }
    double lo = series[0].values[0], hi = lo;
    for (const auto& s : series)
        for (const double v : s.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (lo == hi) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const double width = 800, height = 500;
    const double ml = 80, mr = 24, mt = 24, mb = 52;
    const double pw = width - ml - mr, ph = height - mt - mb;
    const auto x_of = [&](std::size_t i) {
        return n_max == 1 ? ml + pw / 2 : ml + pw * static_cast<double>(i) / static_cast<double>(n_max - 1);
    };
    const auto y_of = [&](double v) { return mt + ph * (1.0 - (v - lo) / (hi - lo)); };

    using detail::fmt2;
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
           "viewBox=\"0 0 800 500\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";

    // axes
    svg += "<line x1=\"" + fmt2(ml) + "\" y1=\"" + fmt2(mt) + "\" x2=\"" + fmt2(ml) + "\" y2=\"" +
           fmt2(mt + ph) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt2(ml) + "\" y1=\"" + fmt2(mt + ph) + "\" x2=\"" + fmt2(ml + pw) + "\" y2=\"" +
           fmt2(mt + ph) + "\" stroke=\"black\"/>\n";

    for (int t = 0; t <= 4; ++t) {
        const double v = lo + (hi - lo) * t / 4.0;
        const double y = y_of(v);
        svg += "<line x1=\"" + fmt2(ml - 4) + "\" y1=\"" + fmt2(y) + "\" x2=\"" + fmt2(ml) + "\" y2=\"" + fmt2(y) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt2(ml - 8) + "\" y=\"" + fmt2(y + 4) + "\" text-anchor=\"end\">" +
               detail::fmt_tick(v) + "</text>\n";
    }
    const std::size_t x_step = n_max <= 20 ? 1 : (n_max + 9) / 10;
    for (std::size_t i = 0; i < n_max; i += x_step) {
        const double x = x_of(i);
        svg += "<line x1=\"" + fmt2(x) + "\" y1=\"" + fmt2(mt + ph) + "\" x2=\"" + fmt2(x) + "\" y2=\"" +
               fmt2(mt + ph + 4) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt2(x) + "\" y=\"" + fmt2(mt + ph + 18) + "\" text-anchor=\"middle\">" +
               std::to_string(i) + "</text>\n";
    }
    svg += "<text x=\"" + fmt2(ml + pw / 2) + "\" y=\"" + fmt2(height - 12) +
           "\" text-anchor=\"middle\">image index</text>\n";
    svg += "<text x=\"18\" y=\"" + fmt2(mt + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           fmt2(mt + ph / 2) + ")\">" + y_label + "</text>\n";

    // data
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = detail::kPalette[s % std::size(detail::kPalette)];
        if (series[s].values.size() >= 2) {
            svg += "<polyline fill=\"none\" stroke=\"";
            svg += color;
            svg += "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < series[s].values.size(); ++i) {
                if (i) svg += " ";
                svg += fmt2(x_of(i)) + "," + fmt2(y_of(series[s].values[i]));
            }
            svg += "\"/>\n";
        }
        for (std::size_t i = 0; i < series[s].values.size(); ++i)
            svg += "<circle cx=\"" + fmt2(x_of(i)) + "\" cy=\"" + fmt2(y_of(series[s].values[i])) +
                   "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }

    // legend
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = detail::kPalette[s % std::size(detail::kPalette)];
        const double y = mt + 8 + 18 * static_cast<double>(s);
        svg += "<rect x=\"" + fmt2(ml + pw - 150) + "\" y=\"" + fmt2(y - 9) + "\" width=\"12\" height=\"12\" fill=\"" +
               color + "\"/>\n";
        svg += "<text x=\"" + fmt2(ml + pw - 132) + "\" y=\"" + fmt2(y + 2) + "\">" + series[s].label + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace somqe
