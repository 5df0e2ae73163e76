#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ergocert::app {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

/// Static SVG line chart with a log10 y axis; nonpositive values are skipped.
void write_svg_chart(const std::vector<Series>& series, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel, std::ostream& out);

}  // namespace ergocert::app
