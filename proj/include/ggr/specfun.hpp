#ifndef GGR_SPECFUN_HPP_
#define GGR_SPECFUN_HPP_

namespace ggr {

/// ln Gamma(x) for x > 0. Lanczos approximation, relative error below
/// 1e-12 on [1e-3, 1e3]. Throws std::domain_error for x <= 0 or non-finite.
double log_gamma(double x);

/// Scaled modified Bessel function exp(-x) * I0(x), x >= 0.
/// Result is in (0, 1]; monotonically decreasing in x.
double bessel_i0_scaled(double x);

/// Bessel function of the first kind J0(x), x >= 0.
double bessel_j0(double x);

/// J1(x), x >= 0. Needed for Newton refinement of J0 zeros.
double bessel_j1(double x);

/// k-th positive zero of J0 (k >= 1). McMahon start, Newton refined.
double bessel_j0_zero(int k);

/// Kolmogorov limiting survival function
/// Q(x) = 2 * sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2), x >= 0.
double kolmogorov_sf(double x);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace ggr

#endif  // GGR_SPECFUN_HPP_
