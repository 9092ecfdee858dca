#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "ggr/distributions.hpp"
#include "ggr/gof.hpp"
#include "ggr/sampling.hpp"
#include "ggr/specfun.hpp"

using namespace ggr;

namespace {

double gg_variance(double alpha, double gamma) {
  return gamma * gamma *
         std::exp(log_gamma(3.0 / alpha) - log_gamma(1.0 / alpha));
}

double ks_distance_to_cdf(std::vector<double> xs,
                          const std::function<double(double)>& F) {
  std::sort(xs.begin(), xs.end());
  double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double f = F(xs[i]);
    d = std::max(d, std::abs(f - i / n));
    d = std::max(d, std::abs((i + 1) / n - f));
  }
  return d;
}

}  // namespace

TEST_CASE("sample_gg moments across shapes") {
  struct Case { double a, g, d; };
  for (const Case& c : std::vector<Case>{{2.0, std::sqrt(2.0), 0.0},
                                         {1.0, 1.0, 0.0},
                                         {1.5, 2.0, 3.0}}) {
    RngStream rng(123, static_cast<std::uint64_t>(c.a * 10));
    auto xs = sample_gg(1000000, c.a, c.g, c.d, rng);
    double sum = 0.0;
    for (double x : xs) sum += x;
    double mean = sum / xs.size();
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= xs.size();
    CHECK(std::abs(mean - c.d) < 0.01);
    CHECK(var == doctest::Approx(gg_variance(c.a, c.g)).epsilon(0.01));
  }
}

TEST_CASE("sample_gg input validation") {
  RngStream rng(1);
  CHECK_THROWS(sample_gg(0, 1.0, 1.0, 0.0, rng));
  CHECK_THROWS(sample_gg(10, -1.0, 1.0, 0.0, rng));
  CHECK_THROWS(sample_gg(10, 1.0, 0.0, 0.0, rng));
}

TEST_CASE("sample_gg histogram matches the GG pdf in KL") {
  for (double alpha : {0.7, 1.0, 1.5, 2.0}) {
    RngStream rng(7, static_cast<std::uint64_t>(alpha * 100));
    auto xs = sample_gg(100000, alpha, 1.0, 0.0, rng);
    // KL between histogram masses and pdf masses over the same bins
    SampleSet shifted;  // histogram helper needs nonnegative data
    shifted.domain = SampleDomain::amplitude;
    double lo = *std::min_element(xs.begin(), xs.end());
    for (double x : xs) shifted.values.push_back(x - lo);
    Histogram h = build_histogram(shifted);
    auto gg_cdf = [&](double z) {
      // symmetric GG cdf via regularized incomplete gamma
      double x = z + lo;
      double t = std::pow(std::abs(x), alpha);
      double g = 0.5 * gamma_p(1.0 / alpha, t);
      return x >= 0.0 ? 0.5 + g : 0.5 - g;
    };
    double kl = 0.0;
    for (int b = 0; b < h.bins(); ++b) {
      double p = h.mass(b);
      if (p <= 0.0) continue;
      double q = gg_cdf(h.edges[b + 1]) - gg_cdf(h.edges[b]);
      kl += p * std::log(p / q);
    }
    CHECK(kl < 0.01);
  }
}

TEST_CASE("sample_ggrician alpha=2 delta=0 is Rayleigh") {
  RngStream rng(99);
  SampleSet s = sample_ggrician(100000, {2.0, std::sqrt(2.0), 0.0}, rng);
  CHECK(s.domain == SampleDomain::amplitude);
  double d = ks_distance_to_cdf(
      s.values, [](double r) { return 1.0 - std::exp(-0.5 * r * r); });
  CHECK(d < 0.02);
}

TEST_CASE("sample_ggrician near-deterministic limit") {
  RngStream rng(5);
  SampleSet s = sample_ggrician(10000, {2.0, 0.1, 100.0}, rng);
  double sum = 0.0;
  for (double v : s.values) sum += v;
  double mean = sum / s.values.size();
  CHECK(mean == doctest::Approx(std::sqrt(2.0) * 100.0).epsilon(0.005));
}

TEST_CASE("sample_ggrician alpha=2 passes KS against closed-form Rician") {
  // calibration: fitted nothing, testing the generator against truth
  QuadratureRule q(64);
  int fails = 0;
  for (int seed = 0; seed < 100; ++seed) {
    RngStream rng(seed, 77);
    SampleSet s = sample_ggrician(2000, {2.0, 2.0, 1.5}, rng);
    ModelSpec m = ModelSpec::rician(2.0 / std::sqrt(2.0),
                                    std::sqrt(2.0) * 1.5);
    auto [d, p] = ks_test(s, m, q);
    if (p <= 0.01) ++fails;
  }
  CHECK(fails <= 5);
}

TEST_CASE("reference samplers hit their stated moments") {
  RngStream r1(31);
  SampleSet w = sample_reference(ModelSpec::weibull(1.0, 2.0), 1000000, r1);
  double sum = 0.0;
  for (double v : w.values) sum += v;
  CHECK(sum / w.values.size() == doctest::Approx(2.0).epsilon(0.01));

  RngStream r2(32);
  SampleSet ln = sample_reference(ModelSpec::lognormal(0.0, 0.5), 1000000, r2);
  std::nth_element(ln.values.begin(),
                   ln.values.begin() + ln.values.size() / 2, ln.values.end());
  CHECK(ln.values[ln.values.size() / 2] == doctest::Approx(1.0).epsilon(0.01));

  RngStream r3(33);
  SampleSet rc = sample_reference(ModelSpec::rician(1.0, 0.0), 100000, r3);
  double d = ks_distance_to_cdf(
      rc.values, [](double r) { return 1.0 - std::exp(-0.5 * r * r); });
  CHECK(d < 0.02);

  RngStream r4(34);
  SampleSet ga = sample_reference(ModelSpec::gamma_looks(3.0, 2.0), 500000, r4);
  double gsum = 0.0;
  for (double v : ga.values) gsum += v;
  // mean of the (L, gamma) parameterization is 1/gamma
  CHECK(gsum / ga.values.size() == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("sample_reference rejects unsupported families") {
  RngStream rng(1);
  CHECK_THROWS(sample_reference(ModelSpec::g0(1.0, 1.0, -2.0), 10, rng));
  CHECK_THROWS(sample_reference(ModelSpec::stable_rayleigh(1.5, 1.0), 10, rng));
}

TEST_CASE("reproducibility of sampled sets") {
  RngStream a(77, 5), b(77, 5);
  SampleSet s1 = sample_ggrician(500, {1.2, 2.0, 1.0}, a);
  SampleSet s2 = sample_ggrician(500, {1.2, 2.0, 1.0}, b);
  CHECK(s1.values == s2.values);
}
