#ifndef GGR_SAMPLING_HPP_
#define GGR_SAMPLING_HPP_

#include <cstdint>
#include <vector>

#include "ggr/distributions.hpp"
#include "ggr/rng.hpp"
#include "ggr/sample_set.hpp"

namespace ggr {

/// n generalized-Gaussian draws: x = delta + gamma * S * G^{1/alpha},
/// G ~ Gamma(1/alpha, 1), S = +/-1 equiprobable. Draws may be negative.
std::vector<double> sample_gg(std::size_t n, double alpha, double gamma,
                              double delta, RngStream& rng);

/// Amplitude r = sqrt(x^2 + y^2) of two independent GG components.
SampleSet sample_ggrician(std::size_t n, const GGRicianParams& p,
                          RngStream& rng);

/// Reference-family sampler for test oracles. Supports Weibull, Lognormal,
/// Rayleigh, Rician, Exponential and Gamma.
SampleSet sample_reference(const ModelSpec& m, std::size_t n, RngStream& rng);

}  // namespace ggr

#endif  // GGR_SAMPLING_HPP_
