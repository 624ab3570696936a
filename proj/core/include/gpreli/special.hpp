#pragma once

#include <functional>

namespace gpreli {

// Modified Bessel function of the second kind K_order(x).
// Half-integer orders use the closed-form finite sum; other orders combine the
// Temme series (x <= 2) with the Thompson–Barnett continued fraction (x > 2)
// and upward recurrence in the order. Relative error <= 1e-12 for
// order <= 10, x in [1e-8, 50] (checked against a frozen quadrature oracle).
double bessel_k(double order, double x);

// Standard-normal quantile Phi^{-1}(prob): AS241 rational approximation plus
// one Newton polish step through erfc in long double; |Phi(result) - prob|
// stays below 1e-10 across (0,1) including far tails.
double normal_quantile(double prob);

// ln Beta(a, b) via lgamma.
double log_beta(double a, double b);

// Adaptive Gauss–Legendre quadrature of f on [a, b] to absolute tolerance
// abs_tol: 15-point panels, bisect until the two-half refinement agrees.
double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b, double abs_tol);

} // namespace gpreli
