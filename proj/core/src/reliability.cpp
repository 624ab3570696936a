#include <gpreli/reliability.hpp>

#include <gpreli/csv.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace gpreli {

namespace {

void require_matching(const Eigen::VectorXd& true_values, const PredictionBand& band,
                      const char* who) {
    if (true_values.size() != band.means.size()) {
        throw shape_error(std::string(who) + ": " + std::to_string(true_values.size()) +
                          " true values vs band of size " + std::to_string(band.means.size()));
    }
    if (true_values.size() == 0) {
        throw input_error(std::string(who) + ": empty evaluation set");
    }
}

} // namespace

RatioMetricResult ratio_metric(const Eigen::VectorXd& true_values,
                               const PredictionBand& band, double p) {
    require_matching(true_values, band, "ratio_metric");
    if (!(p >= 2.0)) {
        throw parameter_error("ratio_metric: p must be >= 2 (or infinity), got " +
                              std::to_string(p));
    }
    const int m = static_cast<int>(true_values.size());
    RatioMetricResult result;
    double accum = 0.0;
    double max_ratio = 0.0;
    bool hit_infinite = false;
    for (int i = 0; i < m; ++i) {
        const double err = std::fabs(true_values(i) - band.means(i));
        const double width = 2.0 * band.half_widths(i);
        double ratio;
        if (width == 0.0) {
            if (err == 0.0) {
                ratio = 0.0; // 0/0 inside the band by convention
            } else {
                hit_infinite = true;
                ++result.infinite_count;
                continue;
            }
        } else {
            ratio = err / width;
        }
        max_ratio = std::max(max_ratio, ratio);
        accum += std::pow(ratio, p == kPInfinity ? 1.0 : p);
    }
    if (p == kPInfinity) {
        result.value = hit_infinite ? kPInfinity : max_ratio;
    } else {
        result.value = hit_infinite ? kPInfinity : accum / m;
    }
    return result;
}

double coverage_rate(const Eigen::VectorXd& true_values, const PredictionBand& band) {
    require_matching(true_values, band, "coverage_rate");
    const int m = static_cast<int>(true_values.size());
    int covered = 0;
    for (int i = 0; i < m; ++i) {
        const double lo = band.means(i) - band.half_widths(i);
        const double hi = band.means(i) + band.half_widths(i);
        if (true_values(i) >= lo && true_values(i) <= hi) ++covered;
    }
    return static_cast<double>(covered) / m;
}

double acp(const Eigen::VectorXd& true_values_at_design,
           const PredictionBand& band_at_design) {
    return coverage_rate(true_values_at_design, band_at_design);
}

SlopeFit loglog_slope(const std::vector<double>& ns, const std::vector<double>& Es) {
    if (ns.size() != Es.size()) {
        throw shape_error("loglog_slope: " + std::to_string(ns.size()) + " n values vs " +
                          std::to_string(Es.size()) + " E values");
    }
    if (ns.size() < 3) {
        throw input_error("loglog_slope: needs at least 3 pairs, got " +
                          std::to_string(ns.size()));
    }
    const int m = static_cast<int>(ns.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < m; ++i) {
        if (!(ns[i] > 0.0) || !(Es[i] > 0.0) || !std::isfinite(Es[i])) {
            throw input_error("loglog_slope: pair " + std::to_string(i) +
                              " is not positive finite (n=" + std::to_string(ns[i]) +
                              ", E=" + std::to_string(Es[i]) + ")");
        }
        const double x = std::log(ns[i]);
        const double y = std::log(Es[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double det = m * sxx - sx * sx;
    if (det <= 0.0) {
        throw input_error("loglog_slope: design sizes are not distinct");
    }
    SlopeFit fit;
    fit.slope = (m * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / m;
    const double ss_tot = syy - sy * sy / m;
    double ss_res = 0.0;
    for (int i = 0; i < m; ++i) {
        const double resid = std::log(Es[i]) - (fit.intercept + fit.slope * std::log(ns[i]));
        ss_res += resid * resid;
    }
    fit.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

ReliabilityReport make_reliability_report(double p,
                                          std::vector<std::pair<int, double>> rows,
                                          long infinite_ratio_count,
                                          std::vector<double> last_ratios) {
    std::sort(rows.begin(), rows.end());
    ReliabilityReport report;
    report.p = p;
    report.rows = std::move(rows);
    report.infinite_ratio_count = infinite_ratio_count;
    report.last_ratios = std::move(last_ratios);
    std::vector<double> ns, Es;
    for (const auto& [n, e] : report.rows) {
        if (std::isfinite(e) && e > 0.0) {
            ns.push_back(static_cast<double>(n));
            Es.push_back(e);
        }
    }
    if (ns.size() >= 3) {
        report.fit = loglog_slope(ns, Es);
    }
    return report;
}

void write_reliability_csv(const ReliabilityReport& report,
                           const std::filesystem::path& csv_path,
                           const std::filesystem::path& json_path) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(report.rows.size());
    for (const auto& [n, e] : report.rows) {
        rows.push_back({std::to_string(n), format_double(e),
                        format_double(std::log(static_cast<double>(n))),
                        format_double(std::log(e))});
    }
    write_csv(csv_path, {"n", "E", "log_n", "log_E"}, rows);
    std::string json = "{\n";
    json += "  \"slope\": " + format_double(report.fit.slope) + ",\n";
    json += "  \"intercept\": " + format_double(report.fit.intercept) + ",\n";
    json += "  \"r2\": " + format_double(report.fit.r2) + ",\n";
    json += "  \"infinite_ratio_count\": " + std::to_string(report.infinite_ratio_count) + "\n";
    json += "}\n";
    write_text_file(json_path, json);
}

} // namespace gpreli
