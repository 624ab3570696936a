#pragma once

#include <gpreli/designs.hpp>
#include <gpreli/kernels.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>

namespace gpreli {

enum class MuMode {
    Zero,    // interpolation: mu_hat = 0
    PowerLaw // regularized: mu_hat = c * n^alpha
};

enum class Sigma2Mode {
    MleScaled, // Y^T (R + mu I)^{-1} Y / n
    Constant,  // fixed user-supplied value
    Unscaled   // Y^T R^{-1} Y (the squared native norm of the interpolant)
};

struct FitConfig {
    MuMode mu_mode = MuMode::Zero;
    double mu_c = 1.0;      // PowerLaw coefficient c > 0
    double mu_alpha = 0.0;  // PowerLaw exponent alpha < 1
    Sigma2Mode sigma2_mode = Sigma2Mode::MleScaled;
    double sigma2_constant = 1.0; // used when sigma2_mode == Constant
    double beta = 0.05;           // CI level parameter, in (0,1)
    double jitter = 1e-8;         // initial diagonal jitter, >= 0

    void validate() const; // throws parameter_error
};

struct FittedModel {
    Design design;
    Eigen::VectorXd y;
    KernelSpec kernel;
    FitConfig config;
    double mu_hat = 0.0;      // realized regularization
    double jitter_used = 0.0; // realized jitter after any escalation
    Eigen::MatrixXd chol_l;   // lower factor of R + (mu_hat + jitter_used) I
    Eigen::VectorXd dual_weights; // (R + mu_hat I)^{-1} Y (jitter-limited)
    double sigma2_hat = 0.0;

    int n() const { return static_cast<int>(y.size()); }
};

struct PredictionBand {
    Eigen::MatrixXd eval_points;  // m x d
    Eigen::VectorXd means;        // predictor mean
    Eigen::VectorXd half_widths;  // q_{1-beta/2} sqrt(sigma2_hat * power)
    Eigen::VectorXd power_values; // 1 - r(x)^T (R + mu I)^{-1} r(x)

    int size() const { return static_cast<int>(means.size()); }
};

// Correlation matrix (Psi(x_j - x_k))_{jk}: symmetric, unit diagonal.
Eigen::MatrixXd build_correlation_matrix(const Design& design, const KernelSpec& kernel);

struct FactorizeResult {
    Eigen::MatrixXd lower;
    double jitter_used;
};

// Cholesky of R + (mu_hat + jitter) I. On failure the jitter escalates
// by factors of 10 (starting from 1e-8 when the initial jitter is 0) up to
// 1e-4, then a conditioning_error naming the matrix size is thrown.
FactorizeResult factorize(const Eigen::MatrixXd& R, double mu_hat, double initial_jitter);

FittedModel fit(const Design& design, const Eigen::VectorXd& y,
                const KernelSpec& kernel, const FitConfig& config);

double predict_mean(const FittedModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd predict_mean(const FittedModel& model, const Eigen::MatrixXd& xs);

// 1 - r(x)^T (R + mu I)^{-1} r(x), clamped to 0 when within -1e-8 of zero;
// anything more negative is a conditioning_error, not a silent clamp.
double power_function(const FittedModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd power_function(const FittedModel& model, const Eigen::MatrixXd& xs);

// max over probes of sqrt(power); a lower bound of the true supremum.
double sup_power(const FittedModel& model, const Eigen::MatrixXd& probe_points);

// Default probe set: 512 Halton points plus (d=1) the design midpoints.
Eigen::MatrixXd default_power_probes(const Design& design);

PredictionBand confidence_band(const FittedModel& model, const Eigen::MatrixXd& eval_points);

// Y^T R^{-1} Y, the squared native norm of the interpolant. Requires
// mu_mode == Zero (throws mode_error otherwise); jitter-limited exactness.
double native_norm_sq_of_interpolant(const FittedModel& model);

// f(x) = sum_i c_i Psi(x - z_i) together with its exact squared native norm
// c^T R_z c (reproducing property; no factorization, no jitter).
struct RkhsFunction {
    Eigen::MatrixXd centers; // m x d
    Eigen::VectorXd coeffs;  // m
    KernelSpec kernel;
    double native_norm_sq = 0.0;

    double operator()(const Eigen::VectorXd& x) const;
    Eigen::VectorXd eval(const Eigen::MatrixXd& xs) const;
};

RkhsFunction rkhs_function_from_coefficients(const Eigen::MatrixXd& centers,
                                             const Eigen::VectorXd& coeffs,
                                             const KernelSpec& kernel);

// Joint GP sampler: factorizes the correlation of a fixed point set once and
// draws exact multivariate-normal paths from seeded streams. The jitter adds
// an independent nugget, so the sampled process has kernel Psi + jitter*delta;
// jitter_used is exposed because matched downstream variances must include it.
class GpPathSampler {
public:
    GpPathSampler(const Eigen::MatrixXd& points, const KernelSpec& kernel,
                  double sigma2, double jitter = 1e-8);

    Eigen::VectorXd sample(std::uint64_t seed) const;

    double jitter_used() const { return jitter_used_; }
    int size() const { return static_cast<int>(chol_l_.rows()); }

private:
    Eigen::MatrixXd chol_l_;
    double sigma_;
    double jitter_used_;
};

// One-shot convenience wrapper around GpPathSampler.
Eigen::VectorXd sample_gp_path(const Eigen::MatrixXd& points, const KernelSpec& kernel,
                               double sigma2, std::uint64_t seed, double jitter = 1e-8);

// CSV with header "x,mean,lo,hi,power" (d=1), lo/hi = mean -/+ half_width.
void write_band_csv(const PredictionBand& band, const std::filesystem::path& path);

} // namespace gpreli
