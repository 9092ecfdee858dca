#include "ggr/gof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ggr/specfun.hpp"

namespace ggr {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

int sturges_bin_count(std::size_t n) {
  if (n < 1) throw std::invalid_argument("sturges_bin_count: n >= 1 required");
  if (n == 1) return 1;
  return static_cast<int>(
      std::ceil(1.0 + std::log2(static_cast<double>(n))));
}

Histogram build_histogram(const SampleSet& s) {
  s.validate();
  auto [mn_it, mx_it] = std::minmax_element(s.values.begin(), s.values.end());
  double lo = *mn_it, hi = *mx_it;
  if (lo == hi)
    throw std::runtime_error(
        "build_histogram: all samples equal; bins would be degenerate");
  int bins = sturges_bin_count(s.values.size());
  Histogram h;
  h.n = static_cast<double>(s.values.size());
  h.edges.resize(bins + 1);
  double w = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) h.edges[b] = lo + w * b;
  h.edges[bins] = hi;  // exact right edge
  h.counts.assign(bins, 0.0);
  for (double v : s.values) {
    int b = static_cast<int>((v - lo) / w);
    if (b >= bins) b = bins - 1;  // right-closed last bin
    h.counts[b] += 1.0;
  }
  h.densities.resize(bins);
  for (int b = 0; b < bins; ++b)
    h.densities[b] = h.counts[b] / (h.n * h.width(b));
  return h;
}

std::vector<double> model_bin_masses(const Histogram& h, const ModelSpec& m,
                                     const QuadratureRule& q) {
  std::vector<double> cdfs = cdf_at_sorted(m, h.edges, q);
  std::vector<double> mass(h.bins());
  double total = 0.0;
  for (int b = 0; b < h.bins(); ++b) {
    mass[b] = std::max(cdfs[b + 1] - cdfs[b], 0.0);
    total += mass[b];
  }
  if (total > 0.0)
    for (double& v : mass) v /= total;
  return mass;
}

double kl_divergence(const Histogram& h, const ModelSpec& m,
                     const QuadratureRule& q) {
  std::vector<double> qmass = model_bin_masses(h, m, q);
  double kl = 0.0;
  for (int b = 0; b < h.bins(); ++b) {
    double p = h.mass(b);
    if (p <= 0.0) continue;
    if (qmass[b] <= 0.0) return kInf;
    kl += p * std::log(p / qmass[b]);
  }
  return std::max(kl, 0.0);
}

std::pair<double, double> ks_test(const SampleSet& s, const ModelSpec& m,
                                  const QuadratureRule& q) {
  s.validate();
  std::vector<double> xs = s.values;
  std::sort(xs.begin(), xs.end());
  std::vector<double> f = cdf_at_sorted(m, xs, q);
  double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    d = std::max(d, f[i] - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f[i]);
  }
  double p = kolmogorov_sf(std::sqrt(n) * d);
  return {d, p};
}

CurveErrors curve_errors(const Histogram& h, const ModelSpec& m,
                         const QuadratureRule& q) {
  double se = 0.0, ae = 0.0;
  for (int b = 0; b < h.bins(); ++b) {
    double diff = h.densities[b] - pdf(m, h.center(b), q);
    se += diff * diff;
    ae += std::abs(diff);
  }
  int k = h.bins();
  std::vector<double> qmass = model_bin_masses(h, m, q);
  double bc = 0.0;
  for (int b = 0; b < k; ++b) bc += std::sqrt(h.mass(b) * qmass[b]);
  double bd = bc > 0.0 ? std::max(-std::log(std::min(bc, 1.0)), 0.0) : kInf;
  return {std::sqrt(se / k), ae / k, bd};
}

double aicc(double loglik, int k, std::size_t n) {
  if (n <= static_cast<std::size_t>(k) + 1)
    throw std::domain_error("aicc: require n > k + 1");
  double nn = static_cast<double>(n);
  return 2.0 * k - 2.0 * loglik + 2.0 * k * (k + 1.0) / (nn - k - 1.0);
}

std::vector<double> aicc_dif(const std::vector<GofReport>& reports) {
  double best = -kInf;
  for (const auto& r : reports) best = std::max(best, r.aicc);
  std::vector<double> out;
  out.reserve(reports.size());
  for (const auto& r : reports) out.push_back(r.aicc - best);
  return out;
}

GofReport evaluate_model(const SampleSet& s, const ModelSpec& m,
                         const QuadratureRule& q) {
  Histogram h = build_histogram(s);
  GofReport r;
  r.model = m;
  r.n = s.values.size();
  r.n_params = m.n_params();
  r.kl = kl_divergence(h, m, q);
  auto [d, p] = ks_test(s, m, q);
  r.ks_stat = d;
  r.p_value = p;
  CurveErrors ce = curve_errors(h, m, q);
  r.rmse = ce.rmse;
  r.mae = ce.mae;
  r.bd = ce.bd;
  r.loglik = log_likelihood(m, s, q);
  r.aicc = aicc(r.loglik, r.n_params, r.n);
  return r;
}

namespace {

// metric extractors in report order; true = lower is better
struct Metric {
  double (*get)(const GofReport&);
  bool lower_better;
};
const Metric kMetrics[7] = {
    {[](const GofReport& r) { return r.kl; }, true},
    {[](const GofReport& r) { return r.ks_stat; }, true},
    {[](const GofReport& r) { return r.p_value; }, false},
    {[](const GofReport& r) { return r.rmse; }, true},
    {[](const GofReport& r) { return r.mae; }, true},
    {[](const GofReport& r) { return r.bd; }, true},
    {[](const GofReport& r) { return r.aicc; }, true},
};

}  // namespace

std::vector<ScoreRow> score_models(
    const std::vector<std::vector<GofReport>>& reports) {
  if (reports.empty() || reports[0].empty())
    throw std::invalid_argument("score_models: empty report set");
  std::size_t n_models = reports[0].size();
  for (const auto& ds : reports)
    if (ds.size() != n_models)
      throw std::invalid_argument(
          "score_models: every dataset needs a report per model");

  std::vector<double> points(n_models, 0.0);
  for (const auto& ds : reports) {
    for (const Metric& mt : kMetrics) {
      double best = mt.get(ds[0]);
      for (std::size_t j = 1; j < n_models; ++j) {
        double v = mt.get(ds[j]);
        if (mt.lower_better ? v < best : v > best) best = v;
      }
      std::vector<std::size_t> winners;
      for (std::size_t j = 0; j < n_models; ++j)
        if (mt.get(ds[j]) == best) winners.push_back(j);
      for (std::size_t j : winners)
        points[j] += 1.0 / static_cast<double>(winners.size());
    }
  }
  double total = 7.0 * static_cast<double>(reports.size());
  std::vector<ScoreRow> rows(n_models);
  for (std::size_t j = 0; j < n_models; ++j) {
    rows[j].model = reports[0][j].model.name();
    rows[j].points = points[j];
    rows[j].percentage = 100.0 * points[j] / total;
  }
  return rows;
}

namespace {

nlohmann::json finite_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::json report_json(const GofReport& r) {
  nlohmann::json j;
  j["model"] = r.model.name();
  j["params"] = std::vector<double>(r.model.p.begin(),
                                    r.model.p.begin() + r.n_params);
  j["kl"] = finite_or_inf(r.kl);
  j["ks"] = r.ks_stat;
  j["p"] = r.p_value;
  j["rmse"] = r.rmse;
  j["mae"] = r.mae;
  j["bd"] = finite_or_inf(r.bd);
  j["aicc"] = finite_or_inf(r.aicc);
  j["loglik"] = finite_or_inf(r.loglik);
  j["k"] = r.n_params;
  j["n"] = r.n;
  return j;
}

}  // namespace

std::string report_to_json(const GofReport& r) {
  return report_json(r).dump(2);
}

std::string reports_to_json(const std::vector<GofReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  std::vector<double> difs = aicc_dif(reports);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    nlohmann::json j = report_json(reports[i]);
    j["aicc_dif"] = finite_or_inf(difs[i]);
    arr.push_back(j);
  }
  return arr.dump(2);
}

std::string report_csv_header() {
  return "model,kl,ks,p,rmse,mae,bd,aicc,loglik,k,n";
}

std::string report_to_csv_row(const GofReport& r) {
  std::ostringstream os;
  os.precision(12);
  os << r.model.name() << ',' << r.kl << ',' << r.ks_stat << ','
     << r.p_value << ',' << r.rmse << ',' << r.mae << ',' << r.bd << ','
     << r.aicc << ',' << r.loglik << ',' << r.n_params << ',' << r.n;
  return os.str();
}

std::string scores_to_csv(const std::vector<ScoreRow>& rows) {
  std::ostringstream os;
  os.precision(12);
  os << "model,percentage\n";
  for (const auto& r : rows) os << r.model << ',' << r.percentage << '\n';
  return os.str();
}

}  // namespace ggr
