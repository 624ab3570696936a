#include <gpreli/gp.hpp>

#include <gpreli/csv.hpp>
#include <gpreli/rng.hpp>
#include <gpreli/special.hpp>

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace gpreli {

namespace {

constexpr double kPowerClampSlack = 1e-8;
constexpr double kJitterFloor = 1e-8;
constexpr double kJitterCeiling = 1e-4;

Eigen::VectorXd cross_correlation(const Eigen::MatrixXd& design_points,
                                  const KernelSpec& kernel, const Eigen::VectorXd& x) {
    const int n = static_cast<int>(design_points.rows());
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) {
        r(i) = kernel_corr((design_points.row(i).transpose() - x).norm(), kernel);
    }
    return r;
}

void require_eval_shape(const Eigen::MatrixXd& xs, int dim, const char* who) {
    if (static_cast<int>(xs.cols()) != dim) {
        throw shape_error(std::string(who) + ": evaluation points have dim " +
                          std::to_string(xs.cols()) + ", model has dim " + std::to_string(dim));
    }
}

} // namespace

void FitConfig::validate() const {
    if (!(beta > 0.0) || !(beta < 1.0)) {
        throw parameter_error("fit: beta must lie in (0,1), got " + std::to_string(beta));
    }
    if (!(jitter >= 0.0) || !std::isfinite(jitter)) {
        throw parameter_error("fit: jitter must be finite and >= 0, got " +
                              std::to_string(jitter));
    }
    if (mu_mode == MuMode::PowerLaw) {
        if (!(mu_c > 0.0) || !std::isfinite(mu_c)) {
            throw parameter_error("fit: power-law mu requires c > 0, got " +
                                  std::to_string(mu_c));
        }
        if (!(mu_alpha < 1.0)) {
            throw parameter_error("fit: power-law mu requires alpha < 1, got " +
                                  std::to_string(mu_alpha));
        }
    }
    if (sigma2_mode == Sigma2Mode::Constant && !(sigma2_constant > 0.0)) {
        throw parameter_error("fit: constant sigma2 must be > 0, got " +
                              std::to_string(sigma2_constant));
    }
}

Eigen::MatrixXd build_correlation_matrix(const Design& design, const KernelSpec& kernel) {
    const int n = design.n();
    Eigen::MatrixXd R(n, n);
    for (int i = 0; i < n; ++i) {
        R(i, i) = 1.0;
        for (int j = 0; j < i; ++j) {
            const double r = (design.points.row(i) - design.points.row(j)).norm();
            const double value = kernel_corr(r, kernel);
            R(i, j) = value;
            R(j, i) = value;
        }
    }
    return R;
}

FactorizeResult factorize(const Eigen::MatrixXd& R, double mu_hat, double initial_jitter) {
    const int n = static_cast<int>(R.rows());
    double jitter = initial_jitter;
    while (true) {
        Eigen::MatrixXd A = R;
        A.diagonal().array() += mu_hat + jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() == Eigen::Success) {
            return FactorizeResult{llt.matrixL(), jitter};
        }
        if (jitter >= kJitterCeiling) {
            throw conditioning_error("factorize: matrix of size " + std::to_string(n) +
                                     " is not positive definite even with jitter " +
                                     std::to_string(jitter));
        }
        jitter = (jitter == 0.0) ? kJitterFloor : std::min(jitter * 10.0, kJitterCeiling);
    }
}

FittedModel fit(const Design& design, const Eigen::VectorXd& y,
                const KernelSpec& kernel, const FitConfig& config) {
    kernel.validate();
    config.validate();
    const int n = design.n();
    if (n < 1) throw shape_error("fit: design is empty");
    if (static_cast<int>(y.size()) != n) {
        throw shape_error("fit: y has length " + std::to_string(y.size()) +
                          ", design has " + std::to_string(n) + " points");
    }
    if (kernel.dim != design.dim()) {
        throw shape_error("fit: kernel dim " + std::to_string(kernel.dim) +
                          " does not match design dim " + std::to_string(design.dim()));
    }

    FittedModel model;
    model.design = design;
    model.y = y;
    model.kernel = kernel;
    model.config = config;
    model.mu_hat = (config.mu_mode == MuMode::PowerLaw)
                       ? config.mu_c * std::pow(static_cast<double>(n), config.mu_alpha)
                       : 0.0;

    const Eigen::MatrixXd R = build_correlation_matrix(design, kernel);
    FactorizeResult fac = factorize(R, model.mu_hat, config.jitter);
    model.chol_l = std::move(fac.lower);
    model.jitter_used = fac.jitter_used;

    // w = (R + (mu + jitter) I)^{-1} y via the triangular factor
    model.dual_weights = model.chol_l.transpose().triangularView<Eigen::Upper>().solve(
        model.chol_l.triangularView<Eigen::Lower>().solve(y));

    switch (config.sigma2_mode) {
    case Sigma2Mode::MleScaled:
        model.sigma2_hat = y.dot(model.dual_weights) / n;
        break;
    case Sigma2Mode::Constant:
        model.sigma2_hat = config.sigma2_constant;
        break;
    case Sigma2Mode::Unscaled: {
        if (model.mu_hat == 0.0) {
            model.sigma2_hat = y.dot(model.dual_weights);
        } else {
            // Y^T R^{-1} Y needs the un-regularized factorization.
            FactorizeResult plain = factorize(R, 0.0, config.jitter);
            const Eigen::VectorXd w0 =
                plain.lower.transpose().triangularView<Eigen::Upper>().solve(
                    plain.lower.triangularView<Eigen::Lower>().solve(y));
            model.sigma2_hat = y.dot(w0);
        }
        break;
    }
    }
    if (model.sigma2_hat < 0.0) {
        if (model.sigma2_hat < -kPowerClampSlack) {
            throw conditioning_error("fit: variance estimate came out negative (" +
                                     std::to_string(model.sigma2_hat) + ") for n=" +
                                     std::to_string(n));
        }
        model.sigma2_hat = 0.0;
    }
    return model;
}

double predict_mean(const FittedModel& model, const Eigen::VectorXd& x) {
    require_eval_shape(x.transpose(), model.design.dim(), "predict_mean");
    return cross_correlation(model.design.points, model.kernel, x).dot(model.dual_weights);
}

Eigen::VectorXd predict_mean(const FittedModel& model, const Eigen::MatrixXd& xs) {
    require_eval_shape(xs, model.design.dim(), "predict_mean");
    const int m = static_cast<int>(xs.rows());
    Eigen::VectorXd out(m);
    for (int i = 0; i < m; ++i) {
        out(i) = cross_correlation(model.design.points, model.kernel, xs.row(i).transpose())
                     .dot(model.dual_weights);
    }
    return out;
}

namespace {

double power_from_corr(const FittedModel& model, const Eigen::VectorXd& r) {
    // r^T (R + mu I)^{-1} r = |L^{-1} r|^2 with L the stored factor
    const Eigen::VectorXd v = model.chol_l.triangularView<Eigen::Lower>().solve(r);
    const double value = 1.0 - v.squaredNorm();
    if (value < 0.0) {
        if (value < -kPowerClampSlack) {
            throw conditioning_error("power_function: value " + std::to_string(value) +
                                     " below the clamp slack for n=" +
                                     std::to_string(model.n()));
        }
        return 0.0;
    }
    return value;
}

} // namespace

double power_function(const FittedModel& model, const Eigen::VectorXd& x) {
    require_eval_shape(x.transpose(), model.design.dim(), "power_function");
    return power_from_corr(model,
                           cross_correlation(model.design.points, model.kernel, x));
}

Eigen::VectorXd power_function(const FittedModel& model, const Eigen::MatrixXd& xs) {
    require_eval_shape(xs, model.design.dim(), "power_function");
    const int m = static_cast<int>(xs.rows());
    Eigen::VectorXd out(m);
    for (int i = 0; i < m; ++i) {
        out(i) = power_from_corr(
            model, cross_correlation(model.design.points, model.kernel, xs.row(i).transpose()));
    }
    return out;
}

double sup_power(const FittedModel& model, const Eigen::MatrixXd& probe_points) {
    if (probe_points.rows() == 0) {
        throw input_error("sup_power: probe set is empty");
    }
    const Eigen::VectorXd powers = power_function(model, probe_points);
    return std::sqrt(powers.maxCoeff());
}

Eigen::MatrixXd default_power_probes(const Design& design) {
    const int d = design.dim();
    const Eigen::MatrixXd halton = halton_points(512, d);
    const int n = design.n();
    // Pairwise midpoints; for 1-d sorted designs the adjacent ones carry the
    // supremum, the rest cost little and never hurt a max.
    std::vector<Eigen::VectorXd> mids;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            mids.push_back(0.5 * (design.points.row(i) + design.points.row(j)).transpose());
        }
    }
    Eigen::MatrixXd probes(halton.rows() + static_cast<int>(mids.size()), d);
    probes.topRows(halton.rows()) = halton;
    for (int i = 0; i < static_cast<int>(mids.size()); ++i) {
        probes.row(halton.rows() + i) = mids[i].transpose();
    }
    return probes;
}

PredictionBand confidence_band(const FittedModel& model, const Eigen::MatrixXd& eval_points) {
    require_eval_shape(eval_points, model.design.dim(), "confidence_band");
    PredictionBand band;
    band.eval_points = eval_points;
    const int m = static_cast<int>(eval_points.rows());
    band.means.resize(m);
    band.power_values.resize(m);
    for (int i = 0; i < m; ++i) {
        // One cross-correlation vector serves both the mean and the power.
        const Eigen::VectorXd r =
            cross_correlation(model.design.points, model.kernel, eval_points.row(i).transpose());
        band.means(i) = r.dot(model.dual_weights);
        band.power_values(i) = power_from_corr(model, r);
    }
    const double q = normal_quantile(1.0 - 0.5 * model.config.beta);
    band.half_widths =
        (model.sigma2_hat * band.power_values.array()).max(0.0).sqrt() * q;
    return band;
}

double native_norm_sq_of_interpolant(const FittedModel& model) {
    if (model.config.mu_mode != MuMode::Zero) {
        throw mode_error("native_norm_sq_of_interpolant: requires mu_mode Zero "
                         "(interpolation), model was fitted with mu_hat = " +
                         std::to_string(model.mu_hat));
    }
    return model.y.dot(model.dual_weights);
}

double RkhsFunction::operator()(const Eigen::VectorXd& x) const {
    return cross_correlation(centers, kernel, x).dot(coeffs);
}

Eigen::VectorXd RkhsFunction::eval(const Eigen::MatrixXd& xs) const {
    const int m = static_cast<int>(xs.rows());
    Eigen::VectorXd out(m);
    for (int i = 0; i < m; ++i) {
        out(i) = (*this)(xs.row(i).transpose());
    }
    return out;
}

RkhsFunction rkhs_function_from_coefficients(const Eigen::MatrixXd& centers,
                                             const Eigen::VectorXd& coeffs,
                                             const KernelSpec& kernel) {
    if (centers.rows() != coeffs.size()) {
        throw shape_error("rkhs_function_from_coefficients: " + std::to_string(centers.rows()) +
                          " centers vs " + std::to_string(coeffs.size()) + " coefficients");
    }
    const int m = static_cast<int>(centers.rows());
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            if ((centers.row(i).array() == centers.row(j).array()).all()) {
                throw input_error("rkhs_function_from_coefficients: duplicate centers at rows " +
                                  std::to_string(i) + " and " + std::to_string(j));
            }
        }
    }
    RkhsFunction f;
    f.centers = centers;
    f.coeffs = coeffs;
    f.kernel = kernel;
    Eigen::MatrixXd Rz(m, m);
    for (int i = 0; i < m; ++i) {
        Rz(i, i) = 1.0;
        for (int j = 0; j < i; ++j) {
            const double value =
                kernel_corr((centers.row(i) - centers.row(j)).norm(), kernel);
            Rz(i, j) = value;
            Rz(j, i) = value;
        }
    }
    f.native_norm_sq = coeffs.dot(Rz * coeffs);
    return f;
}

GpPathSampler::GpPathSampler(const Eigen::MatrixXd& points, const KernelSpec& kernel,
                             double sigma2, double jitter) {
    if (!(sigma2 > 0.0)) {
        throw parameter_error("sample_gp_path: sigma2 must be > 0, got " +
                              std::to_string(sigma2));
    }
    Design pseudo;
    pseudo.points = points;
    const Eigen::MatrixXd R = build_correlation_matrix(pseudo, kernel);
    FactorizeResult fac = factorize(R, 0.0, jitter);
    chol_l_ = std::move(fac.lower);
    jitter_used_ = fac.jitter_used;
    sigma_ = std::sqrt(sigma2);
}

Eigen::VectorXd GpPathSampler::sample(std::uint64_t seed) const {
    const int m = size();
    Rng rng(seed);
    Eigen::VectorXd z(m);
    for (int i = 0; i < m; ++i) z(i) = rng.normal();
    const Eigen::VectorXd correlated = chol_l_.triangularView<Eigen::Lower>() * z;
    return sigma_ * correlated;
}

Eigen::VectorXd sample_gp_path(const Eigen::MatrixXd& points, const KernelSpec& kernel,
                               double sigma2, std::uint64_t seed, double jitter) {
    return GpPathSampler(points, kernel, sigma2, jitter).sample(seed);
}

void write_band_csv(const PredictionBand& band, const std::filesystem::path& path) {
    if (band.eval_points.cols() != 1) {
        throw shape_error("write_band_csv: band CSV is defined for d=1, got d=" +
                          std::to_string(band.eval_points.cols()));
    }
    std::vector<std::vector<std::string>> rows;
    rows.reserve(band.size());
    for (int i = 0; i < band.size(); ++i) {
        rows.push_back({format_double(band.eval_points(i, 0)),
                        format_double(band.means(i)),
                        format_double(band.means(i) - band.half_widths(i)),
                        format_double(band.means(i) + band.half_widths(i)),
                        format_double(band.power_values(i))});
    }
    write_csv(path, {"x", "mean", "lo", "hi", "power"}, rows);
}

} // namespace gpreli
