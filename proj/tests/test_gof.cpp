#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ggr/gof.hpp"
#include "ggr/quadrature.hpp"
#include "ggr/rng.hpp"
#include "ggr/sampling.hpp"
#include "ggr/specfun.hpp"

using namespace ggr;

namespace {

SampleSet make_set(std::vector<double> v,
                   SampleDomain d = SampleDomain::amplitude) {
  SampleSet s;
  s.values = std::move(v);
  s.domain = d;
  return s;
}

}  // namespace

TEST_CASE("Sturges bin counts") {
  CHECK(sturges_bin_count(1) == 1);
  CHECK(sturges_bin_count(2) == 2);
  CHECK(sturges_bin_count(100) == 8);
  CHECK(sturges_bin_count(1500) == 12);
  CHECK(sturges_bin_count(5000) == 14);
}

TEST_CASE("histogram on a tiny hand-checkable set") {
  SampleSet s = make_set({0.0, 1.0, 2.0, 3.0});
  Histogram h = build_histogram(s);
  // 4 points -> 3 bins of width 1; last bin right-closed catches 3.0
  REQUIRE(h.bins() == 3);
  CHECK(h.edges.front() == 0.0);
  CHECK(h.edges.back() == 3.0);
  CHECK(h.counts[0] == 1.0);
  CHECK(h.counts[1] == 1.0);
  CHECK(h.counts[2] == 2.0);
  double mass = 0.0;
  for (int b = 0; b < h.bins(); ++b) mass += h.densities[b] * h.width(b);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("histogram rejects degenerate input") {
  CHECK_THROWS(build_histogram(make_set({})));
  CHECK_THROWS(build_histogram(make_set({2.0, 2.0, 2.0})));
}

TEST_CASE("uniform data gives near-unit densities") {
  RngStream rng(17);
  std::vector<double> v;
  for (int i = 0; i < 20000; ++i) v.push_back(rng.uniform());
  Histogram h = build_histogram(make_set(std::move(v)));
  for (int b = 0; b < h.bins(); ++b)
    CHECK(h.densities[b] == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("KL is zero against the generating model and +inf on mismatch") {
  QuadratureRule q(64);
  RngStream rng(29);
  SampleSet s = sample_reference(ModelSpec::weibull(2.0, 1.0), 50000, rng);
  Histogram h = build_histogram(s);
  CHECK(kl_divergence(h, ModelSpec::weibull(2.0, 1.0), q) < 0.01);
  // model with zero mass over occupied bins
  SampleSet far = make_set({1000.0, 1000.5, 1001.0, 1002.0});
  Histogram hf = build_histogram(far);
  double kl = kl_divergence(hf, ModelSpec::weibull(2.0, 1.0), q);
  CHECK(std::isinf(kl));
}

TEST_CASE("KS statistic against a known table value") {
  QuadratureRule q(64);
  // n=100, D such that sqrt(n) D = 1.358 sits at p ~ 0.05
  double d_crit = 1.358 / std::sqrt(100.0);
  CHECK(kolmogorov_sf(std::sqrt(100.0) * d_crit) ==
        doctest::Approx(0.05).epsilon(0.01));
  // exact D for equispaced quantiles of the fitted cdf is <= 1/(2n) + slack
  RngStream rng(41);
  SampleSet s = sample_reference(ModelSpec::weibull(2.0, 1.0), 5000, rng);
  auto [d, p] = ks_test(s, ModelSpec::weibull(2.0, 1.0), q);
  CHECK(d < 0.03);
  CHECK(p > 0.001);
  // p decreases as D grows: test monotonicity through the sf
  CHECK(kolmogorov_sf(1.0) > kolmogorov_sf(1.5));
}

TEST_CASE("KS distance uses both one-sided gaps") {
  QuadratureRule q(64);
  // single point at the median of Weibull(2,1): F = 0.5, ecdf jumps 0 -> 1
  SampleSet s = make_set({std::sqrt(std::log(2.0))});
  auto [d, p] = ks_test(s, ModelSpec::weibull(2.0, 1.0), q);
  CHECK(d == doctest::Approx(0.5).epsilon(1e-9));
  (void)p;
}

TEST_CASE("curve errors: exact model gives tiny errors, BD of self is 0") {
  QuadratureRule q(64);
  RngStream rng(53);
  SampleSet s = sample_reference(ModelSpec::weibull(2.0, 1.0), 100000, rng);
  Histogram h = build_histogram(s);
  CurveErrors e = curve_errors(h, ModelSpec::weibull(2.0, 1.0), q);
  CHECK(e.rmse < 0.02);
  CHECK(e.mae < 0.02);
  CHECK(e.bd < 0.005);
  CHECK(e.bd >= 0.0);
  CHECK(e.mae <= e.rmse + 1e-12);
}

TEST_CASE("aicc closed-form value and error handling") {
  // 2k - 2 ll + 2k(k+1)/(n-k-1) with ll=-200, k=3, n=100: 406 + 24/96
  CHECK(aicc(-200.0, 3, 100) == doctest::Approx(406.25).epsilon(1e-12));
  CHECK_THROWS_AS(aicc(-1.0, 3, 4), std::domain_error);
  // extra parameter at equal likelihood costs ~2 for large n
  double d = aicc(-100.0, 3, 5000) - aicc(-100.0, 2, 5000);
  CHECK(d == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("aicc differences are nonpositive with the maximum at zero") {
  std::vector<GofReport> rs(3);
  rs[0].aicc = 410.0;
  rs[1].aicc = 402.5;
  rs[2].aicc = 425.0;
  std::vector<double> d = aicc_dif(rs);
  CHECK(d[0] == doctest::Approx(-15.0));
  CHECK(d[1] == doctest::Approx(-22.5));
  CHECK(d[2] == doctest::Approx(0.0));
}

TEST_CASE("evaluate_model fills every field consistently") {
  QuadratureRule q(64);
  RngStream rng(61);
  SampleSet s = sample_reference(ModelSpec::weibull(2.0, 1.0), 2000, rng);
  GofReport r = evaluate_model(s, ModelSpec::weibull(2.0, 1.0), q);
  CHECK(r.n == 2000);
  CHECK(r.n_params == 2);
  CHECK(std::isfinite(r.loglik));
  CHECK(r.aicc ==
        doctest::Approx(aicc(r.loglik, r.n_params, r.n)).epsilon(1e-12));
  CHECK(r.kl < 0.02);
  CHECK(r.p_value > 0.001);
}

TEST_CASE("score_models: single model takes 100 percent") {
  GofReport r;
  r.model = ModelSpec::weibull(2.0, 1.0);
  auto rows = score_models({{r}});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].percentage == doctest::Approx(100.0));
  CHECK(rows[0].points == doctest::Approx(7.0));
}

TEST_CASE("score_models: strict winner sweeps all seven metrics") {
  GofReport a, b;
  a.model = ModelSpec::weibull(2.0, 1.0);
  b.model = ModelSpec::lognormal(0.0, 1.0);
  // a strictly better everywhere: lower kl/ks/rmse/mae/bd, higher p,
  // lower aicc
  a.kl = 0.1; b.kl = 0.2;
  a.ks_stat = 0.1; b.ks_stat = 0.2;
  a.p_value = 0.9; b.p_value = 0.5;
  a.rmse = 0.1; b.rmse = 0.2;
  a.mae = 0.1; b.mae = 0.2;
  a.bd = 0.1; b.bd = 0.2;
  a.aicc = 100.0; b.aicc = 120.0;
  auto rows = score_models({{a, b}});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].points == doctest::Approx(7.0));
  CHECK(rows[1].points == doctest::Approx(0.0));
  CHECK(rows[0].percentage == doctest::Approx(100.0));
}

TEST_CASE("score_models: split on two datasets and exact ties") {
  GofReport a, b;
  a.model = ModelSpec::weibull(2.0, 1.0);
  b.model = ModelSpec::lognormal(0.0, 1.0);
  a.kl = b.kl = 0.1;  // tie on every metric in dataset 1
  a.ks_stat = b.ks_stat = 0.1;
  a.p_value = b.p_value = 0.5;
  a.rmse = b.rmse = 0.1;
  a.mae = b.mae = 0.1;
  a.bd = b.bd = 0.1;
  a.aicc = b.aicc = 100.0;
  GofReport c = a, d = b;
  c.kl = 0.05;  // dataset 2: c wins kl only, rest still tied
  auto rows = score_models({{a, b}, {c, d}});
  // 14 points total: 13 tied metrics split 6.5/6.5, kl win adds 1 to c
  CHECK(rows[0].points == doctest::Approx(7.5));
  CHECK(rows[1].points == doctest::Approx(6.5));
  CHECK(rows[0].percentage == doctest::Approx(100.0 * 7.5 / 14.0));
}

TEST_CASE("CSV and JSON carry the documented fields") {
  GofReport r;
  r.model = ModelSpec::weibull(2.0, 1.0);
  r.kl = 0.01;
  r.ks_stat = 0.02;
  r.p_value = 0.9;
  r.rmse = 0.003;
  r.mae = 0.002;
  r.bd = 0.001;
  r.aicc = 123.0;
  r.loglik = -60.0;
  r.n_params = 2;
  r.n = 1000;
  CHECK(report_csv_header() == "model,kl,ks,p,rmse,mae,bd,aicc,loglik,k,n");
  std::string row = report_to_csv_row(r);
  CHECK(row.rfind("weibull,", 0) == 0);
  std::string j = report_to_json(r);
  for (const char* key : {"\"model\"", "\"kl\"", "\"ks\"", "\"p\"", "\"rmse\"",
                          "\"mae\"", "\"bd\"", "\"aicc\"", "\"loglik\"",
                          "\"k\"", "\"n\""})
    CHECK(j.find(key) != std::string::npos);
  // +inf serializes as a string, not a bare token
  r.kl = std::numeric_limits<double>::infinity();
  CHECK(report_to_json(r).find("\"inf\"") != std::string::npos);
  // the report list adds the aicc_dif column
  CHECK(reports_to_json({r}).find("\"aicc_dif\"") != std::string::npos);

  std::vector<ScoreRow> rows = {{"weibull", 7.0, 100.0}};
  std::string csv = scores_to_csv(rows);
  CHECK(csv.rfind("model,percentage", 0) == 0);
  CHECK(csv.find("weibull,") != std::string::npos);
}

TEST_CASE("model bin masses renormalize over the histogram span") {
  QuadratureRule q(64);
  RngStream rng(71);
  SampleSet s = sample_reference(ModelSpec::weibull(2.0, 1.0), 5000, rng);
  Histogram h = build_histogram(s);
  std::vector<double> m = model_bin_masses(h, ModelSpec::weibull(2.0, 1.0), q);
  double tot = 0.0;
  for (double v : m) tot += v;
  CHECK(tot == doctest::Approx(1.0).epsilon(1e-9));
}
