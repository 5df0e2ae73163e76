#include "ergocert/app/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace ergocert::app {

void write_svg_chart(const std::vector<Series>& series, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel, std::ostream& out) {
    constexpr double W = 720, H = 440, left = 80, right = 170, top = 40, bottom = 60;
    constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!(y > 0.0) || !std::isfinite(y)) continue;
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, std::log10(y));
            y1 = std::max(y1, std::log10(y));
        }
    }
    if (!(x1 > x0)) x1 = x0 + 1.0;
    y0 = std::floor(y0);
    y1 = std::ceil(y1);
    if (!(y1 > y0)) y1 = y0 + 1.0;
    const double pw = W - left - right, ph = H - top - bottom;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double ly) { return top + (y1 - ly) / (y1 - y0) * ph; };

    fmt::print(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
                    "font-family=\"sans-serif\" font-size=\"12\">\n", W, H);
    fmt::print(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    fmt::print(out, "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
               left + pw / 2, title);
    fmt::print(out, "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
               left, top, pw, ph);

    const int ystep = std::max(1, static_cast<int>((y1 - y0) / 10.0 + 0.999));
    for (int e = static_cast<int>(y0); e <= static_cast<int>(y1); e += ystep) {
        const double y = py(e);
        fmt::print(out, "<line x1=\"{}\" y1=\"{:.1f}\" x2=\"{}\" y2=\"{:.1f}\" stroke=\"#ddd\"/>\n",
                   left, y, left + pw, y);
        fmt::print(out, "<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">1e{}</text>\n", left - 6, y + 4, e);
    }
    for (int i = 0; i <= 5; ++i) {
        const double x = x0 + (x1 - x0) * i / 5.0;
        fmt::print(out, "<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{:g}</text>\n", px(x),
                   top + ph + 18, std::round(x * 100.0) / 100.0);
    }
    fmt::print(out, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", left + pw / 2, H - 15, xlabel);
    fmt::print(out, "<text transform=\"translate(18 {}) rotate(-90)\" text-anchor=\"middle\">{}</text>\n",
               top + ph / 2, ylabel);

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = colors[i % 5];
        std::string path;
        for (const auto& [x, y] : series[i].points) {
            if (!(y > 0.0) || !std::isfinite(y)) continue;
            path += fmt::format("{}{:.1f},{:.1f}", path.empty() ? "M" : " L", px(x), py(std::log10(y)));
        }
        fmt::print(out, "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\"/>\n", path, color);
        const double ly = top + 16 + 18 * static_cast<double>(i);
        fmt::print(out, "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                   left + pw + 12, ly, left + pw + 34, ly, color);
        fmt::print(out, "<text x=\"{}\" y=\"{}\">{}</text>\n", left + pw + 40, ly + 4, series[i].name);
    }
    out << "</svg>\n";
}

}  // namespace ergocert::app
