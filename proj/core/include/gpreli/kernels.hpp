#pragma once

#include <gpreli/error.hpp>

namespace gpreli {

enum class KernelFamily { Matern, GeneralizedWendland };

// Stationary correlation family on [0,1]^d. The Matérn member is the
// reparametrized form Psi(h) = |h|^t K_t(|h|) / (Gamma(t) 2^(t-1}) with
// t = nu - d/2, i.e. the length scale phi = 1/(2 sqrt(t)) is absorbed into
// the lag, so no scale parameter appears here.
struct KernelSpec {
    KernelFamily family = KernelFamily::Matern;
    double nu = 3.5; // Matérn: Sobolev smoothness, requires nu > d/2
    int dim = 1;
    double kappa = 1.0;  // GW shape, requires kappa > 0
    double mu_gw = 3.0;  // GW exponent, requires mu_gw >= (d+1)/2 + kappa

    static KernelSpec matern(double nu, int dim) {
        KernelSpec s;
        s.family = KernelFamily::Matern;
        s.nu = nu;
        s.dim = dim;
        s.validate();
        return s;
    }
    static KernelSpec generalized_wendland(double kappa, double mu_gw, int dim) {
        KernelSpec s;
        s.family = KernelFamily::GeneralizedWendland;
        s.kappa = kappa;
        s.mu_gw = mu_gw;
        s.dim = dim;
        s.validate();
        return s;
    }

    double nu_tilde() const { return nu - 0.5 * static_cast<double>(dim); }

    // Throws parameter_error on an invalid combination.
    void validate() const;
};

// Matérn correlation at lag r >= 0; exactly 1 below the small-argument
// threshold 1e-10 (the 0*inf removable singularity), strictly decreasing.
double matern_corr(double r, const KernelSpec& spec);

// Generalized Wendland correlation: beta-normalized integral on [r,1],
// exactly 0 for r >= 1.
double generalized_wendland_corr(double r, const KernelSpec& spec);

// Family dispatch.
double kernel_corr(double r, const KernelSpec& spec);

// Matérn spectral density under the absorbed-scale parametrization:
// f(w) = pi^(-d/2) * Gamma(nu)/Gamma(nu - d/2) * (1 + w^2)^(-nu),
// so f(w) * (1 + w^2)^nu is exactly constant (the algebraic-decay sandwich
// collapses to one value).
double matern_spectral_density(double w, const KernelSpec& spec);

} // namespace gpreli
