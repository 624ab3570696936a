#include <gpreli/kernels.hpp>

#include <gpreli/special.hpp>

#include <cmath>
#include <string>

namespace gpreli {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMaternSmallLag = 1e-10;

void require_lag(double r, const char* who) {
    if (!std::isfinite(r) || r < 0.0) {
        throw domain_error(std::string(who) + ": lag must be finite and nonnegative");
    }
}

} // namespace

void KernelSpec::validate() const {
    if (dim < 1) {
        throw parameter_error("kernel: dim must be >= 1, got " + std::to_string(dim));
    }
    switch (family) {
    case KernelFamily::Matern:
        if (!std::isfinite(nu) || !(nu > 0.5 * dim)) {
            throw parameter_error("kernel: Matérn requires nu > d/2, got nu=" +
                                  std::to_string(nu) + " with d=" + std::to_string(dim));
        }
        break;
    case KernelFamily::GeneralizedWendland: {
        if (!std::isfinite(kappa) || !(kappa > 0.0)) {
            throw parameter_error("kernel: generalized Wendland requires kappa > 0, got " +
                                  std::to_string(kappa));
        }
        const double mu_min = 0.5 * (dim + 1) + kappa;
        if (!std::isfinite(mu_gw) || mu_gw < mu_min) {
            throw parameter_error("kernel: generalized Wendland requires mu >= (d+1)/2 + kappa = " +
                                  std::to_string(mu_min) + ", got " + std::to_string(mu_gw));
        }
        break;
    }
    }
}

double matern_corr(double r, const KernelSpec& spec) {
    require_lag(r, "matern_corr");
    const double nt = spec.nu_tilde();
    if (!std::isfinite(spec.nu) || !(nt > 0.0)) {
        throw parameter_error("matern_corr: requires nu > d/2, got nu=" +
                              std::to_string(spec.nu) + " with d=" + std::to_string(spec.dim));
    }
    if (r < kMaternSmallLag) return 1.0;
    // Psi(r) = r^t K_t(r) / (Gamma(t) 2^{t-1}), t = nu - d/2
    const double log_scale = nt * std::log(r) - std::lgamma(nt) - (nt - 1.0) * std::log(2.0);
    const double k = bessel_k(nt, r);
    if (k <= 0.0) return 0.0; // K underflowed: correlation is below double range
    const double value = std::exp(log_scale + std::log(k));
    return value;
}

double generalized_wendland_corr(double r, const KernelSpec& spec) {
    require_lag(r, "generalized_wendland_corr");
    if (!(spec.kappa > 0.0)) {
        throw parameter_error("generalized_wendland_corr: requires kappa > 0, got " +
                              std::to_string(spec.kappa));
    }
    const double mu_min = 0.5 * (spec.dim + 1) + spec.kappa;
    if (spec.mu_gw < mu_min) {
        throw parameter_error("generalized_wendland_corr: requires mu >= (d+1)/2 + kappa = " +
                              std::to_string(mu_min) + ", got " + std::to_string(spec.mu_gw));
    }
    if (r >= 1.0) return 0.0;
    if (r == 0.0) return 1.0;
    // Psi(r) = I(r) / B(2 kappa, mu + 1) with the integral taken in
    // s = sqrt(u^2 - r^2), which removes the (u^2 - r^2)^{kappa-1} kink at u=r:
    //   I(r) = ∫_0^{sqrt(1-r^2)} s^{2 kappa - 1} (1 - sqrt(r^2 + s^2))^mu ds.
    const double kappa = spec.kappa;
    const double mu = spec.mu_gw;
    const double upper = std::sqrt((1.0 - r) * (1.0 + r));
    const auto integrand = [r, kappa, mu](double s) {
        const double u = std::hypot(r, s);
        const double base = 1.0 - u;
        if (base <= 0.0) return 0.0;
        return std::pow(s, 2.0 * kappa - 1.0) * std::pow(base, mu);
    };
    const double integral = integrate_adaptive(integrand, 0.0, upper, 1e-13);
    const double beta = std::exp(log_beta(2.0 * kappa, mu + 1.0));
    return integral / beta;
}

double kernel_corr(double r, const KernelSpec& spec) {
    switch (spec.family) {
    case KernelFamily::Matern:
        return matern_corr(r, spec);
    case KernelFamily::GeneralizedWendland:
        return generalized_wendland_corr(r, spec);
    }
    throw parameter_error("kernel_corr: unknown kernel family");
}

double matern_spectral_density(double w, const KernelSpec& spec) {
    if (!std::isfinite(w)) {
        throw domain_error("matern_spectral_density: frequency must be finite");
    }
    const double nt = spec.nu_tilde();
    if (!(nt > 0.0)) {
        throw parameter_error("matern_spectral_density: requires nu > d/2, got nu=" +
                              std::to_string(spec.nu) + " with d=" + std::to_string(spec.dim));
    }
    const double log_const = -0.5 * spec.dim * std::log(kPi) + std::lgamma(spec.nu) -
                             std::lgamma(nt);
    return std::exp(log_const - spec.nu * std::log1p(w * w));
}

} // namespace gpreli
