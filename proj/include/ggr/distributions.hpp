#ifndef GGR_DISTRIBUTIONS_HPP_
#define GGR_DISTRIBUTIONS_HPP_

#include <array>
#include <string>
#include <vector>

#include "ggr/quadrature.hpp"
#include "ggr/sample_set.hpp"

namespace ggr {

/// Shape / scale / location of the GG-Rician family.
struct GGRicianParams {
  double alpha;  // shape, > 0
  double gamma;  // scale, > 0
  double delta;  // location, >= 0

  void validate() const;
};

enum class Family {
  ggrician_amplitude,
  ggrician_intensity,
  rician,          // (sigma, Delta)
  rayleigh,        // (sigma)
  nakagami_rice,   // (R, Delta)
  laplace_rician,  // (gamma, delta)
  ggr,             // (alpha, gamma)
  weibull,         // (alpha, gamma)
  lognormal,       // (mu, gamma)
  g0,              // (L, gamma, alpha), alpha < 0
  ggamma,          // (nu_p, sigma, kappa)
  stable_rayleigh, // (alpha, gamma), alpha in (0, 2]
  gamma_looks,     // (L, gamma), pdf (gamma L)^L / Gamma(L) v^{L-1} e^{-gamma L v}
  exponential      // (gamma), rate form: gamma e^{-gamma v}
};

enum class ModelDomain { amplitude, intensity, either };

/// A distribution family plus its parameter vector.
struct ModelSpec {
  Family family;
  std::array<double, 3> p{};

  static ModelSpec ggrician_amplitude(const GGRicianParams& gp);
  static ModelSpec ggrician_intensity(const GGRicianParams& gp);
  static ModelSpec rician(double sigma, double delta_cap);
  static ModelSpec rayleigh(double sigma);
  static ModelSpec nakagami_rice(double r_scale, double delta_cap);
  static ModelSpec laplace_rician(double gamma, double delta);
  static ModelSpec ggr(double alpha, double gamma);
  static ModelSpec weibull(double alpha, double gamma);
  static ModelSpec lognormal(double mu, double gamma);
  static ModelSpec g0(double looks, double gamma, double alpha);
  static ModelSpec ggamma(double nu_p, double sigma, double kappa);
  static ModelSpec stable_rayleigh(double alpha, double gamma);
  static ModelSpec gamma_looks(double looks, double gamma);
  static ModelSpec exponential(double gamma);

  GGRicianParams ggrician_params() const;
  int n_params() const;
  ModelDomain domain() const;
  std::string name() const;
  void validate() const;
};

/// Kink angles of the GG-Rician theta integrand in (0, 2pi), ascending.
/// These are the angles where r cos(theta) = delta or r sin(theta) = delta.
std::vector<double> ggrician_kink_angles(double r, double delta);

double ggrician_amplitude_pdf(double r, const GGRicianParams& p,
                              const QuadratureRule& q);
double ggrician_amplitude_log_pdf(double r, const GGRicianParams& p,
                                  const QuadratureRule& q);
double ggrician_intensity_pdf(double nu, const GGRicianParams& p,
                              const QuadratureRule& q);
double ggrician_intensity_log_pdf(double nu, const GGRicianParams& p,
                                  const QuadratureRule& q);

/// Closed-form families only; throws for the integral-form GG-Rician and
/// Stable-Rayleigh evaluators.
double closed_form_pdf(const ModelSpec& m, double x);

double stable_rayleigh_pdf(double r, double alpha, double gamma,
                           double envelope_cutoff = 40.0);

/// pdf / log-pdf dispatcher over every supported family.
double pdf(const ModelSpec& m, double x, const QuadratureRule& q);
double log_pdf(const ModelSpec& m, double x, const QuadratureRule& q);

/// CDF; closed form where available, otherwise adaptive integration of the
/// pdf from 0 (absolute error <= 1e-7).
double cdf(const ModelSpec& m, double x, const QuadratureRule& q);

/// CDF evaluated on an ascending grid by cumulative panel integration;
/// monotone non-decreasing by construction. xs must be sorted ascending.
std::vector<double> cdf_at_sorted(const ModelSpec& m,
                                  const std::vector<double>& xs,
                                  const QuadratureRule& q);

/// Sum of log pdf over the sample set, -inf if any pdf underflows to zero.
/// Throws if the sample domain tag does not match the family.
double log_likelihood(const ModelSpec& m, const SampleSet& s,
                      const QuadratureRule& q);

}  // namespace ggr

#endif  // GGR_DISTRIBUTIONS_HPP_
