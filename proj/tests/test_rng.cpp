#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ggr/rng.hpp"
#include "ggr/specfun.hpp"

using namespace ggr;

TEST_CASE("identical (seed, stream) reproduces the sequence exactly") {
  RngStream a(42, 3), b(42, 3);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  RngStream c(42, 3), d(42, 3);
  for (int i = 0; i < 100; ++i) {
    CHECK(c.uniform() == d.uniform());
    CHECK(c.normal() == d.normal());
    CHECK(c.gamma(0.7) == d.gamma(0.7));
  }
}

TEST_CASE("different streams decorrelate") {
  RngStream a(42, 0), b(42, 1);
  int same = 0;
  for (int i = 0; i < 1000; ++i)
    if (a.next_u64() == b.next_u64()) ++same;
  CHECK(same == 0);
}

TEST_CASE("uniform stays inside (0,1) with correct moments") {
  RngStream r(7);
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double u = r.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  double mean = sum / n, var = sum2 / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.005));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("normal moments and symmetry") {
  RngStream r(11);
  const int n = 400000;
  double sum = 0.0, sum2 = 0.0, sum3 = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = r.normal();
    sum += z;
    sum2 += z * z;
    sum3 += z * z * z;
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(1).scale(0.01));
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sum3 / n == doctest::Approx(0.0).epsilon(1).scale(0.03));
}

TEST_CASE("exponential mean and tail") {
  RngStream r(13);
  const int n = 200000;
  double sum = 0.0;
  int beyond3 = 0;
  for (int i = 0; i < n; ++i) {
    double e = r.exponential();
    CHECK(e >= 0.0);
    sum += e;
    if (e > 3.0) ++beyond3;
  }
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(double(beyond3) / n == doctest::Approx(std::exp(-3.0)).epsilon(0.08));
}

TEST_CASE("gamma variates match mean/variance for shapes below and above 1") {
  // Gamma(k,1): mean k, variance k; the k<1 branch is the hot path here
  for (double shape : {0.4, 0.59, 1.0, 2.5, 7.0}) {
    RngStream r(17, static_cast<std::uint64_t>(shape * 100));
    const int n = 300000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double g = r.gamma(shape);
      CHECK(g >= 0.0);
      sum += g;
      sum2 += g * g;
    }
    double mean = sum / n, var = sum2 / n - mean * mean;
    CHECK(mean == doctest::Approx(shape).epsilon(0.02));
    CHECK(var == doctest::Approx(shape).epsilon(0.03));
  }
}

TEST_CASE("gamma distribution function agrees with regularized gamma") {
  // empirical CDF at a few cut points vs gamma_p oracle
  for (double shape : {0.5, 2.0}) {
    RngStream r(23, static_cast<std::uint64_t>(shape * 10));
    const int n = 200000;
    std::vector<double> cuts = {0.25 * shape, shape, 2.0 * shape};
    std::vector<int> counts(cuts.size(), 0);
    for (int i = 0; i < n; ++i) {
      double g = r.gamma(shape);
      for (std::size_t c = 0; c < cuts.size(); ++c)
        if (g <= cuts[c]) ++counts[c];
    }
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      double want = gamma_p(shape, cuts[c]);
      CHECK(double(counts[c]) / n == doctest::Approx(want).epsilon(0.02));
    }
  }
}
