#pragma once

#include <gpreli/gp.hpp>
#include <gpreli/reliability.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gpreli {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f63a8";
    bool draw_line = false;   // connect points
    bool draw_markers = true; // one circle per point
};

struct SvgPanel {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<SvgSeries> series;
    // Optional straight line y = slope*x + intercept in axis coordinates
    // (after any log transform), e.g. a fitted regression.
    std::optional<std::pair<double, double>> fit_line;
};

// Self-contained, byte-deterministic SVG: fixed 640x480 canvas, axes with
// ticks, one marker per data point. Empty panels (no series, or a series
// with no points) throw input_error; log axes reject nonpositive values.
std::string render_svg_panel(const SvgPanel& panel);
void emit_svg_panel(const SvgPanel& panel, const std::filesystem::path& path);

// Panel-2 style view of a reliability report: log n vs log E scatter plus
// the fitted regression line.
void emit_svg_panel(const ReliabilityReport& report, const std::filesystem::path& path);

// Band view (d=1 only): mean curve with lower/upper envelope curves.
void emit_svg_panel(const PredictionBand& band, const std::filesystem::path& path);

} // namespace gpreli
