#ifndef GGR_GOF_HPP_
#define GGR_GOF_HPP_

#include <string>
#include <utility>
#include <vector>

#include "ggr/distributions.hpp"
#include "ggr/sample_set.hpp"

namespace ggr {

struct Histogram {
  std::vector<double> edges;      // bin boundaries, ascending, size bins+1
  std::vector<double> counts;     // tallies, sum to sample count
  std::vector<double> densities;  // counts normalized so sum(d*width) = 1
  double n = 0.0;

  int bins() const { return static_cast<int>(counts.size()); }
  double center(int b) const { return 0.5 * (edges[b] + edges[b + 1]); }
  double width(int b) const { return edges[b + 1] - edges[b]; }
  double mass(int b) const { return counts[b] / n; }
};

struct GofReport {
  ModelSpec model;
  double kl = 0.0;  // may be +inf
  double ks_stat = 0.0;
  double p_value = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
  double bd = 0.0;
  double aicc = 0.0;
  double loglik = 0.0;
  int n_params = 0;
  std::size_t n = 0;
};

/// ceil(1 + log2 n)
int sturges_bin_count(std::size_t n);

/// Equal-width bins over [min, max], Sturges count, half-open [l, r) with a
/// right-closed last bin. Throws on empty or all-equal input.
Histogram build_histogram(const SampleSet& s);

/// Model bin masses cdf(r) - cdf(l), renormalized over the histogram span.
std::vector<double> model_bin_masses(const Histogram& h, const ModelSpec& m,
                                     const QuadratureRule& q);

/// Discrete KL over bin masses; +inf if an occupied bin gets zero model
/// mass; empty bins contribute 0.
double kl_divergence(const Histogram& h, const ModelSpec& m,
                     const QuadratureRule& q);

/// Two-sided KS distance at the sorted sample points and the asymptotic
/// p-value kolmogorov_sf(sqrt(n) * D).
std::pair<double, double> ks_test(const SampleSet& s, const ModelSpec& m,
                                  const QuadratureRule& q);

struct CurveErrors {
  double rmse, mae, bd;
};

/// RMSE / MAE between histogram densities and the model pdf at bin centers;
/// BD = -ln sum sqrt(p_b q_b) over (renormalized) bin masses.
CurveErrors curve_errors(const Histogram& h, const ModelSpec& m,
                         const QuadratureRule& q);

/// 2k - 2 loglik + 2k(k+1)/(n-k-1); throws domain_error unless n > k+1.
double aicc(double loglik, int k, std::size_t n);

/// AICc - AICc_best per report, AICc_best being the set maximum, so every
/// value is <= 0 and the maximum-AICc model sits at 0.
std::vector<double> aicc_dif(const std::vector<GofReport>& reports);

/// Full report for one (sample set, model) pair.
GofReport evaluate_model(const SampleSet& s, const ModelSpec& m,
                         const QuadratureRule& q);

struct ScoreRow {
  std::string model;
  double points;
  double percentage;
};

/// One point per (dataset, metric) winner across the seven metrics (KL, KS,
/// p, RMSE, MAE, BD, AICc); ties split the point. reports[d] holds the
/// per-model reports of dataset d in a fixed model order shared by all
/// datasets.
std::vector<ScoreRow> score_models(
    const std::vector<std::vector<GofReport>>& reports);

std::string report_to_json(const GofReport& r);
std::string reports_to_json(const std::vector<GofReport>& reports);
std::string report_csv_header();
std::string report_to_csv_row(const GofReport& r);
std::string scores_to_csv(const std::vector<ScoreRow>& rows);

}  // namespace ggr

#endif  // GGR_GOF_HPP_
