#include <gpreli/special.hpp>

#include <gpreli/error.hpp>

#include <cmath>
#include <cstdint>
#include <limits>

namespace gpreli {

namespace {

constexpr long double kPi = 3.14159265358979323846264338327950288L;

// Series coefficients for 1/Gamma(z) = sum_k c_k z^k (Abramowitz & Stegun
// 6.1.34). Truncated where the tail is below 1e-17 for |mu| <= 0.5.
constexpr long double kInvGammaCoeff[] = {
    1.0L,
    0.5772156649015329L,
    -0.6558780715202538L,
    -0.0420026350340952L,
    0.1665386113822915L,
    -0.0421977345555443L,
    -0.0096219715278770L,
    0.0072189432466630L,
    -0.0011651675918591L,
    -0.0002152416741149L,
    0.0001280502823882L,
    -0.0000201348547807L,
    -0.0000012504934821L,
    0.0000011330272320L,
    -0.0000002056338417L,
    0.0000000061160950L,
    0.0000000050020075L,
    -0.0000000011812746L,
};

// gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)   (even series in mu)
// gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2        (even series in mu)
// gampl = 1/Gamma(1+mu), gammi = 1/Gamma(1-mu).
void reciprocal_gamma_pair(long double mu, long double& gam1, long double& gam2,
                           long double& gampl, long double& gammi) {
    const long double mu2 = mu * mu;
    long double even = 0.0L; // c2 + c4 mu^2 + ...
    long double odd = 0.0L;  // c1 + c3 mu^2 + ...
    long double pow = 1.0L;
    for (int k = 0; k + 1 < static_cast<int>(sizeof(kInvGammaCoeff) / sizeof(long double));
         k += 2) {
        odd += kInvGammaCoeff[k] * pow;
        even += kInvGammaCoeff[k + 1] * pow;
        pow *= mu2;
    }
    gam1 = -even;
    gam2 = odd;
    gampl = gam2 - mu * gam1;
    gammi = gam2 + mu * gam1;
}

// K_{m+1/2}(x) = sqrt(pi/(2x)) e^{-x} sum_{k=0}^{m} (m+k)! / (k! (m-k)! (2x)^k)
long double bessel_k_half_integer(int m, long double x) {
    long double sum = 1.0L;
    long double term = 1.0L;
    for (int k = 1; k <= m; ++k) {
        // term_{k} / term_{k-1} = (m+k)(m-k+1) / (2kx)
        term *= static_cast<long double>((m + k) * (m - k + 1)) / (2.0L * k * x);
        sum += term;
    }
    return std::sqrt(kPi / (2.0L * x)) * std::exp(-x) * sum;
}

// Temme's series for K_mu(x) and K_{mu+1}(x), |mu| <= 1/2, 0 < x <= 2.
void bessel_k_temme(long double mu, long double x, long double& kmu, long double& kmu1) {
    constexpr long double eps = 1e-18L;
    constexpr int max_iter = 20000;
    const long double half_x = 0.5L * x;
    const long double pimu = kPi * mu;
    const long double fact = (std::fabs(pimu) < eps) ? 1.0L : pimu / std::sin(pimu);
    long double d = -std::log(half_x);
    long double e = mu * d;
    const long double fact2 = (std::fabs(e) < eps) ? 1.0L : std::sinh(e) / e;
    long double gam1, gam2, gampl, gammi;
    reciprocal_gamma_pair(mu, gam1, gam2, gampl, gammi);
    long double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    long double sum = ff;
    e = std::exp(e);
    long double p = 0.5L * e / gampl;
    long double q = 0.5L / (e * gammi);
    long double c = 1.0L;
    d = half_x * half_x;
    long double sum1 = p;
    int i = 1;
    for (; i <= max_iter; ++i) {
        ff = (i * ff + p + q) / (i * static_cast<long double>(i) - mu * mu);
        c *= d / i;
        p /= (i - mu);
        q /= (i + mu);
        const long double del = c * ff;
        sum += del;
        sum1 += c * (p - i * ff);
        if (std::fabs(del) < std::fabs(sum) * eps) break;
    }
    if (i > max_iter) throw numeric_error("bessel_k: series failed to converge");
    kmu = sum;
    kmu1 = sum1 * 2.0L / x;
}

// Steed/Thompson–Barnett continued fraction CF2 for K_mu(x), |mu| <= 1/2, x > 2.
void bessel_k_cf2(long double mu, long double x, long double& kmu, long double& kmu1) {
    constexpr long double eps = 1e-18L;
    constexpr int max_iter = 20000;
    long double b = 2.0L * (1.0L + x);
    long double d = 1.0L / b;
    long double h = d;
    long double delh = d;
    long double q1 = 0.0L;
    long double q2 = 1.0L;
    const long double a1 = 0.25L - mu * mu;
    long double q = a1;
    long double c = a1;
    long double a = -a1;
    long double s = 1.0L + q * delh;
    int i = 2;
    for (; i <= max_iter; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        const long double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0L;
        d = 1.0L / (b + a * d);
        delh = (b * d - 1.0L) * delh;
        h += delh;
        const long double dels = q * delh;
        s += dels;
        if (std::fabs(dels / s) < eps) break;
    }
    if (i > max_iter) throw numeric_error("bessel_k: continued fraction failed to converge");
    h = a1 * h;
    kmu = std::sqrt(kPi / (2.0L * x)) * std::exp(-x) / s;
    kmu1 = kmu * (mu + x + 0.5L - h) / x;
}

} // namespace

double bessel_k(double nu, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw domain_error("bessel_k: argument x must be positive and finite");
    }
    if (!std::isfinite(nu)) {
        throw domain_error("bessel_k: order must be finite");
    }
    nu = std::fabs(nu); // K_{-nu} = K_{nu}

    const long double xl = static_cast<long double>(x);

    // Half-integer orders have an exact finite closed form.
    const double two_nu = 2.0 * nu;
    if (two_nu == std::floor(two_nu) && std::fmod(two_nu, 2.0) == 1.0) {
        const int m = static_cast<int>(std::lround(nu - 0.5));
        return static_cast<double>(bessel_k_half_integer(m, xl));
    }

    const int nl = static_cast<int>(nu + 0.5);
    const long double mu = static_cast<long double>(nu) - nl; // |mu| <= 1/2
    long double kmu, kmu1;
    if (x <= 2.0) {
        bessel_k_temme(mu, xl, kmu, kmu1);
    } else {
        bessel_k_cf2(mu, xl, kmu, kmu1);
    }
    // Upward recurrence K_{v+1}(x) = K_{v-1}(x) + (2v/x) K_v(x), stable for K.
    for (int i = 1; i <= nl; ++i) {
        const long double knext = kmu + (2.0L * (mu + i) / xl) * kmu1;
        kmu = kmu1;
        kmu1 = knext;
    }
    const double result = static_cast<double>(kmu);
    if (!std::isfinite(result)) {
        throw numeric_error("bessel_k: result overflowed for nu=" + std::to_string(nu) +
                            ", x=" + std::to_string(x));
    }
    return result;
}

namespace {

// Wichura's algorithm AS 241 (PPND16): rational minimax initial guess for the
// standard normal quantile, accurate to ~1e-16 relative in the core.
double ppnd16(double p) {
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                  6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
              1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
        const double den =
            (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                  3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
              4.2313330701600911252e+1) * r + 1.0);
        return q * num / den;
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        val = num / den;
    }
    return q < 0.0 ? -val : val;
}

} // namespace

double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw domain_error("normal_quantile: p must lie strictly in (0, 1)");
    }
    long double x = ppnd16(p);
    // One Newton step in extended precision. The residual Phi(x) - p is formed
    // through the short tail of the CDF to avoid cancellation on either side.
    constexpr long double inv_sqrt2 = 0.707106781186547524400844362104849039L;
    constexpr long double inv_sqrt2pi = 0.398942280401432677939946059934381868L;
    long double resid;
    if (p <= 0.5) {
        resid = 0.5L * std::erfc(-x * inv_sqrt2) - static_cast<long double>(p);
    } else {
        resid = (1.0L - static_cast<long double>(p)) - 0.5L * std::erfc(x * inv_sqrt2);
    }
    const long double pdf = inv_sqrt2pi * std::exp(-0.5L * x * x);
    if (pdf > 0.0L) x -= resid / pdf;
    return static_cast<double>(x);
}

double log_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw domain_error("log_beta: both arguments must be positive");
    }
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace {

// 15-point Gauss–Legendre nodes (positive half) and weights on [-1, 1].
constexpr double kGlNode[8] = {
    0.0,
    0.2011940939974345,
    0.3941513470775634,
    0.5709721726085388,
    0.7244177313601701,
    0.8482065834104272,
    0.9372733924007060,
    0.9879925180204854,
};
constexpr double kGlWeight[8] = {
    0.2025782419255613,
    0.1984314853271116,
    0.1861610000155622,
    0.1662692058169939,
    0.1395706779261543,
    0.1071592204671719,
    0.0703660474881081,
    0.0307532419961173,
};

double gl15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = kGlWeight[0] * f(mid);
    for (int j = 1; j < 8; ++j) {
        const double dx = half * kGlNode[j];
        sum += kGlWeight[j] * (f(mid + dx) + f(mid - dx));
    }
    return sum * half;
}

double integrate_recursive(const std::function<double(double)>& f, double a, double b,
                           double whole, double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gl15(f, a, mid);
    const double right = gl15(f, mid, b);
    const double refined = left + right;
    if (depth >= 48 || std::fabs(refined - whole) <= tol) {
        return refined;
    }
    return integrate_recursive(f, a, mid, left, 0.5 * tol, depth + 1) +
           integrate_recursive(f, mid, b, right, 0.5 * tol, depth + 1);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw domain_error("integrate_adaptive: bounds must be finite");
    }
    if (!(abs_tol > 0.0)) {
        throw domain_error("integrate_adaptive: absolute tolerance must be positive");
    }
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    const double whole = gl15(f, a, b);
    return sign * integrate_recursive(f, a, b, whole, abs_tol, 0);
}

} // namespace gpreli
