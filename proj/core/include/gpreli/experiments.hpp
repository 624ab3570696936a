#pragma once

#include <gpreli/config.hpp>
#include <gpreli/gp.hpp>
#include <gpreli/kernels.hpp>
#include <gpreli/reliability.hpp>

#include <Eigen/Core>

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace gpreli {

// Density of the scaled/shifted Cauchy (Student-t with 1 dof):
// t1(x; loc, scale) = 1 / (pi * scale * (1 + ((x-loc)/scale)^2)).
double cauchy_density(double x, double location, double scale);

// f(x) = sin(4x) - 0.02 * t1(x; 1.57, 0.05) on [0,1].
double test_function_gramacy(double x);

// Smooth random-phase trigonometric test function used by the stochastic
// experiment: amplitude * sum_k k^{-(nu+1/2)} cos(pi k x + phi_k). The decay
// places f just inside the native space so the alpha-sweep separates cleanly
// at practical n.
double stochastic_witness(double x, double nu, double amplitude);

// C = 2 * Y~^T R~^{-1} Y~ with Y~ = f at m equispaced grid points.
double estimate_reference_norm_constant(const std::function<double(double)>& f,
                                        const KernelSpec& kernel,
                                        int m_points = 1000,
                                        double jitter = 1e-8);

struct DeterministicRow {
    int n = 0;
    double e_mle = 0.0;        // E under MleScaled sigma2 (Panels 1-2)
    double ratio_constant = 0.0;  // sup ratio under Constant{C} sigma2 (Panel 3)
    double ratio_unscaled = 0.0;  // sup ratio under Unscaled sigma2 (Panel 4)
    double sigma2_mle = 0.0;
    double norm_sq_interpolant = 0.0; // ||I_X f||_N^2 for the MLE-decay check
};

struct DeterministicResult {
    ExperimentConfig config;
    double reference_c = 0.0;           // the Constant-mode sigma2 value
    std::vector<DeterministicRow> rows; // one per n, ascending
    ReliabilityReport mle_report;       // Panel 2 regression over (n, e_mle)
    bool panel1_monotone = false;       // at most one adjacent inversion
    bool panel3_bounded = false;        // ratio <= 1/(2 q_{0.975}) + 1e-6
    bool panel4_bounded = false;        // ratio <= 1
};

struct StochasticCell {
    double alpha = 0.0;
    int n = 0;
    double mean_error_sq = 0.0;  // mean_r ||f - fhat||_{L2}^2 (Halton average)
    double mean_ratio_sq = 0.0;  // mean_r ||(f - fhat) / c~||_{L2}^2
    double mean_width_sq = 0.0;  // mean_r ||c~||_{L2}^2
    double se_error_sq = 0.0;    // Monte-Carlo standard errors of the means
    double se_ratio_sq = 0.0;
};

struct StochasticResult {
    ExperimentConfig config;
    std::vector<StochasticCell> cells;       // sorted by (alpha index, n index)
    std::vector<SlopeFit> error_slopes;      // per alpha: log mean_error_sq vs log n
    bool alpha_star_best = false;            // alpha* has the smallest error at max n
    bool alpha_star_rate_ok = false;         // slope within +-0.25 of -2nu/(2nu+d)
    bool oversmoothed_slower = false;        // alpha=0.8 slope exceeds alpha* slope by >= 0.1
    bool ratio_alpha0_bounded = false;       // mean ratio^2 within x2 across n at alpha=0
    bool ratio_oversmoothed_grows = false;   // mean ratio^2 increasing in n at alpha=0.8
};

struct GpBaselineRow {
    int n = 0;
    double mean_e = 0.0;    // Monte-Carlo mean of E = mean ratio^p over paths
    double e_root = 0.0;    // mean_e^{1/p}
    double se_e = 0.0;
};

struct GpBaselineResult {
    ExperimentConfig config;
    std::vector<GpBaselineRow> rows;
    double max_spread = 0.0; // max_n e_root / min_n e_root
    bool constancy_ok = false; // max_spread <= 1.5
};

DeterministicResult run_deterministic_experiment(const ExperimentConfig& config);
StochasticResult run_stochastic_experiment(const ExperimentConfig& config);
GpBaselineResult run_gp_baseline(const ExperimentConfig& config);

// Write config.json, the per-panel/table CSVs, and summary.json (slopes and
// pass/fail flags) into out_dir. Files are byte-deterministic for a fixed
// master_seed.
void write_experiment_outputs(const DeterministicResult& result,
                              const std::filesystem::path& out_dir);
void write_experiment_outputs(const StochasticResult& result,
                              const std::filesystem::path& out_dir);
void write_experiment_outputs(const GpBaselineResult& result,
                              const std::filesystem::path& out_dir);

} // namespace gpreli
