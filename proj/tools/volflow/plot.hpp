#pragma once

#include <string>
#include <utility>
#include <vector>

namespace volflow::cli {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct PlotOptions {
    std::string title;
    std::string x_label = "x";
    std::string y_label = "y";
    bool log_x = false;
    bool log_y = false;
};

/// Self-contained SVG line plot: axes with ticks, one polyline per series and
/// a legend. Points that are not finite (or not positive on a log axis) are
/// dropped. Throws std::invalid_argument when there is nothing to draw.
std::string render_svg(const std::vector<Series>& series, const PlotOptions& opt = {});

/// render_svg written to path; std::runtime_error when it cannot be written.
void emit_plot(const std::vector<Series>& series, const std::string& path, const PlotOptions& opt = {});

}  // namespace volflow::cli
