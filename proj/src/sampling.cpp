#include "ggr/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace ggr {

std::vector<double> sample_gg(std::size_t n, double alpha, double gamma,
                              double delta, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_gg: n must be >= 1");
  if (!(alpha > 0.0) || !(gamma > 0.0) || !std::isfinite(delta))
    throw std::domain_error("sample_gg: invalid parameters");
  std::vector<double> out(n);
  double inv_alpha = 1.0 / alpha;
  for (std::size_t i = 0; i < n; ++i) {
    double g = rng.gamma(inv_alpha);
    double s = (rng.next_u64() & 1) ? 1.0 : -1.0;
    out[i] = delta + gamma * s * std::pow(g, inv_alpha);
  }
  return out;
}

SampleSet sample_ggrician(std::size_t n, const GGRicianParams& p,
                          RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_ggrician: n must be >= 1");
  p.validate();
  SampleSet s;
  s.domain = SampleDomain::amplitude;
  s.provenance = "ggrician-synth";
  s.values.resize(n);
  double inv_alpha = 1.0 / p.alpha;
  for (std::size_t i = 0; i < n; ++i) {
    double x = p.delta + p.gamma * ((rng.next_u64() & 1) ? 1.0 : -1.0) *
                             std::pow(rng.gamma(inv_alpha), inv_alpha);
    double y = p.delta + p.gamma * ((rng.next_u64() & 1) ? 1.0 : -1.0) *
                             std::pow(rng.gamma(inv_alpha), inv_alpha);
    s.values[i] = std::hypot(x, y);
  }
  return s;
}

SampleSet sample_reference(const ModelSpec& m, std::size_t n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_reference: n must be >= 1");
  m.validate();
  SampleSet s;
  s.provenance = "reference-synth:" + m.name();
  s.values.resize(n);
  switch (m.family) {
    case Family::weibull: {
      s.domain = SampleDomain::amplitude;
      double a = m.p[0], g = m.p[1];
      for (auto& v : s.values)
        v = g * std::pow(rng.exponential(), 1.0 / a);
      break;
    }
    case Family::exponential: {
      s.domain = SampleDomain::intensity;
      double g = m.p[0];  // rate
      for (auto& v : s.values) v = rng.exponential() / g;
      break;
    }
    case Family::rayleigh: {
      s.domain = SampleDomain::amplitude;
      double sig = m.p[0];
      for (auto& v : s.values)
        v = sig * std::sqrt(2.0 * rng.exponential());
      break;
    }
    case Family::lognormal: {
      s.domain = SampleDomain::amplitude;
      double mu = m.p[0], g = m.p[1];
      for (auto& v : s.values) v = std::exp(mu + g * rng.normal());
      break;
    }
    case Family::rician: {
      s.domain = SampleDomain::amplitude;
      // two shifted Gaussians; component mean Delta/sqrt(2) reproduces the
      // Rician noncentrality Delta
      double sig = m.p[0], dc = m.p[1];
      double comp_mean = dc / std::sqrt(2.0);
      for (auto& v : s.values) {
        double x = comp_mean + sig * rng.normal();
        double y = comp_mean + sig * rng.normal();
        v = std::hypot(x, y);
      }
      break;
    }
    case Family::gamma_looks: {
      s.domain = SampleDomain::intensity;
      double looks = m.p[0], g = m.p[1];
      // shape L, rate gamma*L per the pdf convention
      for (auto& v : s.values) v = rng.gamma(looks) / (g * looks);
      break;
    }
    default:
      throw std::invalid_argument("sample_reference: unsupported family " +
                                  m.name());
  }
  return s;
}

}  // namespace ggr
