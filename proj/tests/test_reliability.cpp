#include <gpreli/error.hpp>
#include <gpreli/reliability.hpp>

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

using gpreli::PredictionBand;
using gpreli::RatioMetricResult;
using gpreli::kPInfinity;
using testsupport::rel_err;

namespace {

PredictionBand band_from(std::vector<double> means, std::vector<double> halves) {
    PredictionBand band;
    const int m = static_cast<int>(means.size());
    band.eval_points.resize(m, 1);
    band.means.resize(m);
    band.half_widths.resize(m);
    band.power_values = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
        band.eval_points(i, 0) = static_cast<double>(i) / std::max(1, m - 1);
        band.means(i) = means[static_cast<std::size_t>(i)];
        band.half_widths(i) = halves[static_cast<std::size_t>(i)];
    }
    return band;
}

Eigen::VectorXd vec(std::vector<double> xs) {
    Eigen::VectorXd v(static_cast<long>(xs.size()));
    for (long i = 0; i < v.size(); ++i) v(i) = xs[static_cast<std::size_t>(i)];
    return v;
}

} // namespace

TEST_CASE("ratio_metric computes the mean p-th power of error over width") {
    // errors {0.1, 0.3}, widths {0.4, 1.2} -> ratios {0.25, 0.25}.
    const PredictionBand band = band_from({0.0, 1.0}, {0.2, 0.6});
    const Eigen::VectorXd truth = vec({0.1, 1.3});

    const RatioMetricResult e2 = gpreli::ratio_metric(truth, band, 2.0);
    CHECK(rel_err(e2.value, 0.0625) <= 1e-15);
    CHECK(e2.infinite_count == 0);

    const RatioMetricResult e4 = gpreli::ratio_metric(truth, band, 4.0);
    CHECK(rel_err(e4.value, std::pow(0.25, 4)) <= 1e-15);

    const RatioMetricResult emax = gpreli::ratio_metric(truth, band, kPInfinity);
    CHECK(emax.value == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("ratio_metric conventions at zero width") {
    // Exact hit with zero width contributes zero; a miss with zero width is
    // the infinite sentinel, counted.
    const PredictionBand band = band_from({1.0, 2.0, 3.0}, {0.0, 0.5, 0.0});

    const Eigen::VectorXd exact_hit = vec({1.0, 2.1, 3.0});
    const RatioMetricResult ok = gpreli::ratio_metric(exact_hit, band, 4.0);
    CHECK(ok.infinite_count == 0);
    CHECK(std::isfinite(ok.value));

    const Eigen::VectorXd miss = vec({1.0, 2.1, 3.5});
    const RatioMetricResult inf = gpreli::ratio_metric(miss, band, 4.0);
    CHECK(inf.infinite_count == 1);
    CHECK(std::isinf(inf.value));

    const RatioMetricResult inf_max = gpreli::ratio_metric(miss, band, kPInfinity);
    CHECK(std::isinf(inf_max.value));
    CHECK(inf_max.infinite_count == 1);
}

TEST_CASE("ratio_metric validates inputs") {
    const PredictionBand band = band_from({0.0, 0.0}, {1.0, 1.0});
    CHECK_THROWS_AS(gpreli::ratio_metric(vec({1.0}), band, 4.0), gpreli::shape_error);
    CHECK_THROWS_AS(gpreli::ratio_metric(vec({}), band_from({}, {}), 4.0), gpreli::input_error);
    CHECK_THROWS_AS(gpreli::ratio_metric(vec({0.0, 0.0}), band, 1.5), gpreli::parameter_error);
    CHECK_THROWS_AS(gpreli::ratio_metric(vec({0.0, 0.0}), band, 0.0), gpreli::parameter_error);
    CHECK_NOTHROW(gpreli::ratio_metric(vec({0.0, 0.0}), band, 2.0));
}

TEST_CASE("coverage counts closed-interval membership") {
    const PredictionBand band = band_from({0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0});
    // Exactly on the boundary counts as covered.
    const Eigen::VectorXd truth = vec({1.0, -1.0, 0.5, 1.0000001});
    CHECK(gpreli::coverage_rate(truth, band) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(gpreli::acp(truth, band) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("loglog_slope recovers an exact power law") {
    std::vector<double> ns, es;
    for (int n : {10, 20, 40, 80, 160}) {
        ns.push_back(n);
        es.push_back(3.7 * std::pow(n, 1.25));
    }
    const gpreli::SlopeFit fit = gpreli::loglog_slope(ns, es);
    CHECK(rel_err(fit.slope, 1.25) <= 1e-12);
    CHECK(rel_err(std::exp(fit.intercept), 3.7) <= 1e-12);
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("loglog_slope input validation") {
    CHECK_THROWS_AS(gpreli::loglog_slope({10, 20}, {1.0, 2.0}), gpreli::input_error);
    CHECK_THROWS_AS(gpreli::loglog_slope({10, 20, 30}, {1.0, 2.0}), gpreli::shape_error);
    CHECK_THROWS_AS(gpreli::loglog_slope({10, 20, 30}, {1.0, -2.0, 3.0}), gpreli::input_error);
    CHECK_THROWS_AS(gpreli::loglog_slope({10, 20, 30}, {1.0, 0.0, 3.0}), gpreli::input_error);
    // Identical n values leave the regression underdetermined.
    CHECK_THROWS_AS(gpreli::loglog_slope({10, 10, 10}, {1.0, 2.0, 3.0}), gpreli::input_error);
}

TEST_CASE("make_reliability_report sorts rows and filters infinities") {
    std::vector<std::pair<int, double>> rows = {
        {80, 64.0}, {20, 4.0}, {40, 16.0}, {10, std::numeric_limits<double>::infinity()}};
    const gpreli::ReliabilityReport report =
        gpreli::make_reliability_report(4.0, rows, 3, {0.5, 0.25});
    REQUIRE(report.rows.size() == 4);
    CHECK(report.rows.front().first == 10);
    CHECK(report.rows.back().first == 80);
    CHECK(report.infinite_ratio_count == 3);
    CHECK(report.last_ratios.size() == 2);
    // Fit over the three finite rows: E = n^2 / 100 -> slope 2.
    CHECK(rel_err(report.fit.slope, 2.0) <= 1e-12);
}

TEST_CASE("write_reliability_csv round-trips rows and summary") {
    namespace fs = std::filesystem;
    const fs::path csv = fs::temp_directory_path() / "gpreli_test_reliability.csv";
    const fs::path json = fs::temp_directory_path() / "gpreli_test_reliability.json";

    std::vector<std::pair<int, double>> rows = {{10, 1.0}, {20, 8.0}, {40, 64.0}};
    const gpreli::ReliabilityReport report = gpreli::make_reliability_report(4.0, rows, 0);
    gpreli::write_reliability_csv(report, csv, json);

    std::ifstream in(csv);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "n,E,log_n,log_E");
    int data_rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++data_rows;
    CHECK(data_rows == 3);

    std::ifstream jin(json);
    REQUIRE(jin.good());
    std::stringstream buf;
    buf << jin.rdbuf();
    CHECK(buf.str().find("\"slope\"") != std::string::npos);
    CHECK(buf.str().find("\"infinite_ratio_count\": 0") != std::string::npos);
    fs::remove(csv);
    fs::remove(json);
}
