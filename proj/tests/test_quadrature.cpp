#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "ggr/quadrature.hpp"

using namespace ggr;

TEST_CASE("gauss_legendre weights sum to interval length") {
  for (int n : {2, 7, 16, 64, 256}) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    double s = std::accumulate(w.begin(), w.end(), 0.0);
    CHECK(s == doctest::Approx(2.0).epsilon(1e-13));
    for (int i = 1; i < n; ++i) CHECK(x[i] > x[i - 1]);
    CHECK(x.front() > -1.0);
    CHECK(x.back() < 1.0);
  }
}

TEST_CASE("gauss_legendre integrates polynomials of degree 2n-1 exactly") {
  // n-point rule must integrate x^k exactly for k <= 2n-1
  std::vector<double> x, w;
  gauss_legendre(5, x, w);
  for (int k = 0; k <= 9; ++k) {
    double got = 0.0;
    for (int i = 0; i < 5; ++i) got += w[i] * std::pow(x[i], k);
    double want = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    CHECK(got == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("gauss_legendre nodes match known 2- and 3-point rules") {
  std::vector<double> x, w;
  gauss_legendre(2, x, w);
  CHECK(x[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-14));
  gauss_legendre(3, x, w);
  CHECK(x[2] == doctest::Approx(std::sqrt(0.6)).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("QuadratureRule theta grid covers [0, 2pi]") {
  for (int n : {64, 256}) {
    QuadratureRule q(n);
    CHECK(q.node_count() == n);
    double s = std::accumulate(q.theta_weights().begin(),
                               q.theta_weights().end(), 0.0);
    CHECK(s == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
    const auto& th = q.theta_nodes();
    for (std::size_t i = 1; i < th.size(); ++i) CHECK(th[i] > th[i - 1]);
    CHECK(th.front() >= 0.0);
    CHECK(th.back() <= 2.0 * M_PI);
  }
}

TEST_CASE("QuadratureRule rejects bad node counts") {
  CHECK_THROWS(QuadratureRule(0));
  CHECK_THROWS(QuadratureRule(-5));
}

TEST_CASE("integrate_adaptive on smooth integrands") {
  double v = integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                                M_PI, 1e-12, 1e-12);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
  v = integrate_adaptive([](double x) { return std::exp(-x * x); }, 0.0, 10.0,
                         1e-12, 1e-12);
  CHECK(v == doctest::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("integrate_adaptive handles kinks and mild singularities") {
  double v = integrate_adaptive([](double x) { return std::fabs(x - 0.3); },
                                0.0, 1.0, 1e-12, 1e-12);
  CHECK(v == doctest::Approx((0.09 + 0.49) / 2.0).epsilon(1e-10));
  // integrable sqrt singularity at 0
  v = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 1e-300,
                         1.0, 1e-10, 1e-10);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("integrate_adaptive on an oscillatory integrand") {
  double v = integrate_adaptive([](double x) { return std::cos(40.0 * x); },
                                0.0, 1.0, 1e-12, 1e-12);
  CHECK(v == doctest::Approx(std::sin(40.0) / 40.0).epsilon(1e-10));
}
