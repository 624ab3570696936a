#pragma once

#include <gpreli/gp.hpp>

#include <Eigen/Core>

#include <filesystem>
#include <limits>
#include <utility>
#include <vector>

namespace gpreli {

// p = infinity selects the max-ratio (sup) form of the metric.
inline constexpr double kPInfinity = std::numeric_limits<double>::infinity();

struct RatioMetricResult {
    double value = 0.0;        // E; +infinity when a nonzero error meets a zero width
    long infinite_count = 0;   // number of nonzero-error/zero-width points
};

// E = mean over points of (|f - mean| / width)^p with width = 2*half_width
// and the convention 0/0 = 0; p = kPInfinity gives the max ratio instead.
RatioMetricResult ratio_metric(const Eigen::VectorXd& true_values,
                               const PredictionBand& band, double p);

// Fraction of points with lo <= f(x) <= hi (closed intervals).
double coverage_rate(const Eigen::VectorXd& true_values, const PredictionBand& band);

// Same indicator average restricted to design points: the empirical surrogate
// of the average coverage probability.
double acp(const Eigen::VectorXd& true_values_at_design, const PredictionBand& band_at_design);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// OLS of log E on log n via closed-form normal equations. Requires >= 3 pairs
// with finite positive E (callers filter infinite ratios out first).
SlopeFit loglog_slope(const std::vector<double>& ns, const std::vector<double>& Es);

struct ReliabilityReport {
    double p = 4.0;
    std::vector<std::pair<int, double>> rows; // (n, E), sorted by n
    SlopeFit fit;                             // defined when >= 3 finite rows
    long infinite_ratio_count = 0;
    std::vector<double> last_ratios;          // per-point ratios at the largest n
};

// Assembles the report: sorts rows, excludes non-finite E from the regression
// (surfacing them via infinite_ratio_count).
ReliabilityReport make_reliability_report(double p,
                                          std::vector<std::pair<int, double>> rows,
                                          long infinite_ratio_count,
                                          std::vector<double> last_ratios = {});

// CSV "n,E,log_n,log_E" plus a sibling one-line JSON summary
// {slope, intercept, r2, infinite_ratio_count} at json_path.
void write_reliability_csv(const ReliabilityReport& report,
                           const std::filesystem::path& csv_path,
                           const std::filesystem::path& json_path);

} // namespace gpreli
