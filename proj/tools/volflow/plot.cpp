#include "volflow/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace volflow::cli {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 50;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
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

std::string num(double v, int digits = 4) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

struct Axis {
    double lo = 0, hi = 1;
    bool log = false;

    double map(double v) const { return ((log ? std::log10(v) : v) - lo) / (hi - lo); }
};

Axis make_axis(std::vector<double> vals, bool log) {
    Axis a;
    a.log = log;
    if (log)
        for (double& v : vals) v = std::log10(v);
    a.lo = *std::min_element(vals.begin(), vals.end());
    a.hi = *std::max_element(vals.begin(), vals.end());
    if (a.hi - a.lo < 1e-12 * std::max(1.0, std::fabs(a.hi))) {
        a.lo -= 0.5;
        a.hi += 0.5;
    } else {
        const double pad = 0.05 * (a.hi - a.lo);
        a.lo -= pad;
        a.hi += pad;
    }
    return a;
}

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

}  // namespace

std::string render_svg(const std::vector<Series>& series, const PlotOptions& opt) {
    if (series.empty()) throw std::invalid_argument("plot needs at least one series");
    std::vector<std::vector<std::pair<double, double>>> kept;
    std::vector<double> xs, ys;
    for (const auto& s : series) {
        auto& pts = kept.emplace_back();
        for (const auto& [x, y] : s.points)
            if (usable(x, opt.log_x) && usable(y, opt.log_y)) {
                pts.emplace_back(x, y);
                xs.push_back(x);
                ys.push_back(y);
            }
    }
    if (xs.empty()) throw std::invalid_argument("plot has no drawable points");
    const Axis ax = make_axis(xs, opt.log_x), ay = make_axis(ys, opt.log_y);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + ax.map(x) * pw; };
    auto py = [&](double y) { return kTop + (1.0 - ay.map(y)) * ph; };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
                      "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opt.title.empty())
        svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"13\">" + esc(opt.title) + "</text>\n";
    svg += "<g stroke=\"black\" fill=\"none\">\n<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" +
           num(kLeft + pw) + "\" y2=\"" + num(kTop + ph) + "\"/>\n<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) +
           "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(kTop + ph) + "\"/>\n</g>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = ax.lo + (ax.hi - ax.lo) * k / 4.0, fy = ay.lo + (ay.hi - ay.lo) * k / 4.0;
        const double tx = kLeft + pw * k / 4.0, ty = kTop + ph * (1.0 - k / 4.0);
        const double lx = ax.log ? std::pow(10.0, fx) : fx, ly = ay.log ? std::pow(10.0, fy) : fy;
        svg += "<line x1=\"" + num(tx) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(tx) + "\" y2=\"" + num(kTop + ph + 5) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + num(tx) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" + num(lx) + "</text>\n";
        svg += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(ty) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(ty) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(ty + 4) + "\" text-anchor=\"end\">" + num(ly) + "</text>\n";
    }
    svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) + "\" text-anchor=\"middle\">" +
           esc(opt.x_label + (opt.log_x ? " (log)" : "")) + "</text>\n";
    svg += "<text transform=\"translate(16," + num(kTop + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
           esc(opt.y_label + (opt.log_y ? " (log)" : "")) + "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kColors[i % (sizeof kColors / sizeof kColors[0])];
        std::string pts;
        for (const auto& [x, y] : kept[i]) pts += (pts.empty() ? "" : " ") + num(px(x), 7) + "," + num(py(y), 7);
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        const double ly = kTop + 10 + 16.0 * static_cast<double>(i);
        svg += "<g class=\"legend\"><line x1=\"" + num(kWidth - kRight + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" +
               num(kWidth - kRight + 32) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>";
        svg += "<text x=\"" + num(kWidth - kRight + 38) + "\" y=\"" + num(ly + 4) + "\">" + esc(series[i].label) + "</text></g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void emit_plot(const std::vector<Series>& series, const std::string& path, const PlotOptions& opt) {
    const std::string svg = render_svg(series, opt);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << svg;
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace volflow::cli
