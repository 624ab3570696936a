#include <gpreli/svg.hpp>

#include <gpreli/csv.hpp>
#include <gpreli/error.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

namespace gpreli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 16.0;
constexpr double kMarginTop = 32.0;
constexpr double kMarginBottom = 48.0;
constexpr int kTickCount = 5;

std::string fixed2(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

std::string tick_label(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 5);
    return std::string(buf, res.ptr);
}

std::string xml_escape(const std::string& s) {
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

struct AxisRange {
    double lo = 0.0;
    double hi = 1.0;
};

AxisRange padded(double lo, double hi) {
    if (lo > hi) std::swap(lo, hi);
    double span = hi - lo;
    if (span <= 0.0) {
        const double pad = (lo == 0.0) ? 1.0 : std::fabs(lo) * 0.05;
        return {lo - pad, hi + pad};
    }
    return {lo - 0.05 * span, hi + 0.05 * span};
}

} // namespace

std::string render_svg_panel(const SvgPanel& panel) {
    if (panel.series.empty()) {
        throw input_error("render_svg_panel: no series to draw");
    }
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -std::numeric_limits<double>::infinity();
    double ymin = xmin, ymax = xmax;
    std::size_t total_points = 0;
    for (const auto& s : panel.series) {
        if (s.x.size() != s.y.size()) {
            throw shape_error("render_svg_panel: series '" + s.label + "' has " +
                              std::to_string(s.x.size()) + " x vs " +
                              std::to_string(s.y.size()) + " y values");
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double x = s.x[i];
            double y = s.y[i];
            if (panel.log_x) {
                if (!(x > 0.0)) {
                    throw input_error("render_svg_panel: log x-axis needs positive values, got " +
                                      format_double(x));
                }
                x = std::log(x);
            }
            if (panel.log_y) {
                if (!(y > 0.0)) {
                    throw input_error("render_svg_panel: log y-axis needs positive values, got " +
                                      format_double(y));
                }
                y = std::log(y);
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
            ++total_points;
        }
    }
    if (total_points == 0) {
        throw input_error("render_svg_panel: all series are empty");
    }
    const AxisRange xr = padded(xmin, xmax);
    const AxisRange yr = padded(ymin, ymax);
    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto px = [&](double x) {
        return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w;
    };
    const auto py = [&](double y) {
        return kMarginTop + (yr.hi - y) / (yr.hi - yr.lo) * plot_h;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"#ffffff\"/>\n";
    // frame
    svg += "<rect x=\"" + fixed2(kMarginLeft) + "\" y=\"" + fixed2(kMarginTop) +
           "\" width=\"" + fixed2(plot_w) + "\" height=\"" + fixed2(plot_h) +
           "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    // ticks and labels
    for (int t = 0; t < kTickCount; ++t) {
        const double fx = xr.lo + (xr.hi - xr.lo) * t / (kTickCount - 1);
        const double gx = px(fx);
        svg += "<line x1=\"" + fixed2(gx) + "\" y1=\"" + fixed2(kMarginTop + plot_h) +
               "\" x2=\"" + fixed2(gx) + "\" y2=\"" + fixed2(kMarginTop + plot_h + 5.0) +
               "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + fixed2(gx) + "\" y=\"" + fixed2(kMarginTop + plot_h + 18.0) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
               tick_label(fx) + "</text>\n";
        const double fy = yr.lo + (yr.hi - yr.lo) * t / (kTickCount - 1);
        const double gy = py(fy);
        svg += "<line x1=\"" + fixed2(kMarginLeft - 5.0) + "\" y1=\"" + fixed2(gy) +
               "\" x2=\"" + fixed2(kMarginLeft) + "\" y2=\"" + fixed2(gy) +
               "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + fixed2(kMarginLeft - 8.0) + "\" y=\"" + fixed2(gy + 4.0) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
               tick_label(fy) + "</text>\n";
    }
    // axis labels and title
    svg += "<text x=\"" + fixed2(kMarginLeft + plot_w / 2.0) + "\" y=\"" +
           fixed2(kHeight - 10.0) +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" +
           xml_escape(panel.x_label) + "</text>\n";
    svg += "<text x=\"14\" y=\"" + fixed2(kMarginTop + plot_h / 2.0) +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 14 " + fixed2(kMarginTop + plot_h / 2.0) + ")\">" +
           xml_escape(panel.y_label) + "</text>\n";
    svg += "<text x=\"" + fixed2(kMarginLeft + plot_w / 2.0) + "\" y=\"20\" "
           "font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">" +
           xml_escape(panel.title) + "</text>\n";

    // fit line (clipped to the frame by drawing across the x-range)
    if (panel.fit_line) {
        const auto [slope, intercept] = *panel.fit_line;
        const double y0 = slope * xr.lo + intercept;
        const double y1 = slope * xr.hi + intercept;
        svg += "<line x1=\"" + fixed2(px(xr.lo)) + "\" y1=\"" + fixed2(py(y0)) +
               "\" x2=\"" + fixed2(px(xr.hi)) + "\" y2=\"" + fixed2(py(y1)) +
               "\" stroke=\"#c0392b\" stroke-width=\"1.5\" stroke-dasharray=\"6,3\"/>\n";
    }

    for (const auto& s : panel.series) {
        if (s.draw_line && s.x.size() > 1) {
            std::string points;
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i > 0) points += ' ';
                double x = panel.log_x ? std::log(s.x[i]) : s.x[i];
                double y = panel.log_y ? std::log(s.y[i]) : s.y[i];
                points += fixed2(px(x)) + "," + fixed2(py(y));
            }
            svg += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" + s.color +
                   "\" stroke-width=\"1.5\"/>\n";
        }
        if (s.draw_markers) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                double x = panel.log_x ? std::log(s.x[i]) : s.x[i];
                double y = panel.log_y ? std::log(s.y[i]) : s.y[i];
                svg += "<circle cx=\"" + fixed2(px(x)) + "\" cy=\"" + fixed2(py(y)) +
                       "\" r=\"3\" fill=\"" + s.color + "\"/>\n";
            }
        }
    }
    svg += "</svg>\n";
    return svg;
}

void emit_svg_panel(const SvgPanel& panel, const std::filesystem::path& path) {
    write_text_file(path, render_svg_panel(panel));
}

void emit_svg_panel(const ReliabilityReport& report, const std::filesystem::path& path) {
    SvgPanel panel;
    panel.title = "reliability metric vs design size";
    panel.x_label = "log n";
    panel.y_label = "log E";
    panel.log_x = true;
    panel.log_y = true;
    SvgSeries series;
    series.label = "E";
    for (const auto& [n, e] : report.rows) {
        if (std::isfinite(e) && e > 0.0) {
            series.x.push_back(static_cast<double>(n));
            series.y.push_back(e);
        }
    }
    panel.series.push_back(std::move(series));
    if (panel.series[0].x.size() >= 3) {
        panel.fit_line = std::make_pair(report.fit.slope, report.fit.intercept);
    }
    emit_svg_panel(panel, path);
}

void emit_svg_panel(const PredictionBand& band, const std::filesystem::path& path) {
    if (band.eval_points.cols() != 1) {
        throw shape_error("emit_svg_panel: band plots are defined for d=1, got d=" +
                          std::to_string(band.eval_points.cols()));
    }
    if (band.size() == 0) {
        throw input_error("emit_svg_panel: band is empty");
    }
    // sort by x for connected curves
    std::vector<int> order(band.size());
    for (int i = 0; i < band.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return band.eval_points(a, 0) < band.eval_points(b, 0);
    });
    SvgPanel panel;
    panel.title = "prediction band";
    panel.x_label = "x";
    panel.y_label = "f";
    SvgSeries mean{"mean", {}, {}, "#1f63a8", true, false};
    SvgSeries lo{"lo", {}, {}, "#7da7ce", true, false};
    SvgSeries hi{"hi", {}, {}, "#7da7ce", true, false};
    for (int idx : order) {
        const double x = band.eval_points(idx, 0);
        mean.x.push_back(x);
        mean.y.push_back(band.means(idx));
        lo.x.push_back(x);
        lo.y.push_back(band.means(idx) - band.half_widths(idx));
        hi.x.push_back(x);
        hi.y.push_back(band.means(idx) + band.half_widths(idx));
    }
    panel.series.push_back(std::move(lo));
    panel.series.push_back(std::move(hi));
    panel.series.push_back(std::move(mean));
    emit_svg_panel(panel, path);
}

} // namespace gpreli
