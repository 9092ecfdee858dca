#include "ggr/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ggr/rng.hpp"
#include "ggr/specfun.hpp"

namespace ggr {
namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Cached GG-Rician chain likelihood. Node geometry (panel layout, weights,
// log moduli) depends only on delta; the powered sums depend on (delta,
// alpha). Keeping both lets the gamma move cost one exp per node and the
// alpha move three, with a full rebuild only on delta moves.
class ChainLikelihood {
 public:
  ChainLikelihood(const SampleSet& s, const QuadratureRule& q)
      : q_(q), intensity_(s.domain == SampleDomain::intensity) {
    for (double v : s.values) {
      if (v == 0.0) {
        if (!intensity_)
          throw std::runtime_error(
              "mh_fit: amplitude sample equal to 0 has zero density under "
              "the GG-Rician model");
        ++n_zero_;
        continue;
      }
      double r = intensity_ ? std::sqrt(v) : v;
      r_.push_back(r);
      sum_log_r_ += std::log(r);
      if (intensity_) jacobian_ -= std::log(2.0 * r);
    }
    n_ = r_.size();
    stride_ = 5 * q_.node_count();
    std::size_t cap = n_ * static_cast<std::size_t>(stride_);
    w_.resize(cap);
    l1_.resize(cap);
    l2_.resize(cap);
    pw_.resize(cap);
    pw_s_.resize(cap);
    w_s_.resize(cap);
    l1_s_.resize(cap);
    l2_s_.resize(cap);
    cnt_.resize(n_);
    cnt_s_.resize(n_);
    pwmin_.resize(n_);
    pwmin_s_.resize(n_);
  }

  double init(double alpha, double gamma, double delta) {
    alpha_ = alpha;
    gamma_ = gamma;
    delta_ = delta;
    double ll = build(delta, alpha, cnt_, w_, l1_, l2_, pw_, pwmin_, gamma);
    return ll;
  }

  double eval_delta(double delta_cand) {
    return build(delta_cand, alpha_, cnt_s_, w_s_, l1_s_, l2_s_, pw_s_,
                 pwmin_s_, gamma_);
  }
  void accept_delta(double delta_cand) {
    cnt_.swap(cnt_s_);
    w_.swap(w_s_);
    l1_.swap(l1_s_);
    l2_.swap(l2_s_);
    pw_.swap(pw_s_);
    pwmin_.swap(pwmin_s_);
    delta_ = delta_cand;
  }

  double eval_gamma(double gamma_cand) const {
    double inv_ga = std::pow(gamma_cand, -alpha_);
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double* pw = pw_.data() + i * stride_;
      const double* w = w_.data() + i * stride_;
      double s = 0.0;
      double m = pwmin_[i];
      int c = cnt_[i];
      for (int j = 0; j < c; ++j) s += w[j] * std::exp((m - pw[j]) * inv_ga);
      acc += std::log(s) - m * inv_ga;
    }
    return assemble(acc, alpha_, gamma_cand, delta_);
  }
  void accept_gamma(double gamma_cand) { gamma_ = gamma_cand; }

  double eval_alpha(double alpha_cand) {
    double inv_ga = std::pow(gamma_, -alpha_cand);
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double* l1 = l1_.data() + i * stride_;
      const double* l2 = l2_.data() + i * stride_;
      const double* w = w_.data() + i * stride_;
      double* pw = pw_s_.data() + i * stride_;
      int c = cnt_[i];
      double m = std::numeric_limits<double>::infinity();
      for (int j = 0; j < c; ++j) {
        double v = std::exp(alpha_cand * l1[j]) + std::exp(alpha_cand * l2[j]);
        pw[j] = v;
        if (v < m) m = v;
      }
      pwmin_s_[i] = m;
      double s = 0.0;
      for (int j = 0; j < c; ++j) s += w[j] * std::exp((m - pw[j]) * inv_ga);
      acc += std::log(s) - m * inv_ga;
    }
    return assemble(acc, alpha_cand, gamma_, delta_);
  }
  void accept_alpha(double alpha_cand) {
    pw_.swap(pw_s_);
    pwmin_.swap(pwmin_s_);
    alpha_ = alpha_cand;
  }

 private:
  double assemble(double integral_acc, double alpha, double gamma,
                  double delta) const {
    double logpref = 2.0 * std::log(alpha) - std::log(4.0) -
                     2.0 * std::log(gamma) - 2.0 * log_gamma(1.0 / alpha);
    double ll = static_cast<double>(n_) * logpref + sum_log_r_ + jacobian_ +
                integral_acc;
    if (n_zero_ > 0) {
      double zero_lp = 2.0 * std::log(alpha) - std::log(8.0) -
                       2.0 * std::log(gamma) - 2.0 * log_gamma(1.0 / alpha) +
                       std::log(kTwoPi) -
                       2.0 * std::pow(delta / gamma, alpha);
      ll += static_cast<double>(n_zero_) * zero_lp;
    }
    return ll;
  }

  double build(double delta, double alpha, std::vector<int>& cnt,
               std::vector<double>& w, std::vector<double>& l1,
               std::vector<double>& l2, std::vector<double>& pw,
               std::vector<double>& pwmin, double gamma) const {
    const int nn = q_.node_count();
    const double* bx = q_.base_nodes().data();
    const double* bw = q_.base_weights().data();
    double inv_ga = std::pow(gamma, -alpha);
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double r = r_[i];
      double edges[6];
      int ne = 0;
      edges[ne++] = 0.0;
      if (delta < r) {
        double c = delta / r;
        double tc = std::acos(c), ts = std::asin(c);
        double k[4] = {ts, tc, M_PI - ts, kTwoPi - tc};
        std::sort(k, k + 4);
        for (double kk : k)
          if (kk > edges[ne - 1] + 1e-14 && kk < kTwoPi - 1e-14)
            edges[ne++] = kk;
      }
      edges[ne++] = kTwoPi;
      double* wi = w.data() + i * stride_;
      double* l1i = l1.data() + i * stride_;
      double* l2i = l2.data() + i * stride_;
      double* pwi = pw.data() + i * stride_;
      int c = 0;
      double m = std::numeric_limits<double>::infinity();
      for (int seg = 0; seg + 1 < ne; ++seg) {
        double half = 0.5 * (edges[seg + 1] - edges[seg]);
        double mid = 0.5 * (edges[seg + 1] + edges[seg]);
        for (int j = 0; j < nn; ++j, ++c) {
          double th = mid + half * bx[j];
          double u = std::abs(r * std::cos(th) - delta);
          double v = std::abs(r * std::sin(th) - delta);
          double lu = std::log(u), lv = std::log(v);
          double p = std::exp(alpha * lu) + std::exp(alpha * lv);
          wi[c] = half * bw[j];
          l1i[c] = lu;
          l2i[c] = lv;
          pwi[c] = p;
          if (p < m) m = p;
        }
      }
      cnt[i] = c;
      pwmin[i] = m;
      double s = 0.0;
      for (int j = 0; j < c; ++j)
        s += wi[j] * std::exp((m - pwi[j]) * inv_ga);
      acc += std::log(s) - m * inv_ga;
    }
    return assemble(acc, alpha, gamma, delta);
  }

  const QuadratureRule& q_;
  bool intensity_;
  std::size_t n_ = 0, n_zero_ = 0;
  int stride_ = 0;
  std::vector<double> r_;
  double sum_log_r_ = 0.0, jacobian_ = 0.0;
  double alpha_ = 0.0, gamma_ = 0.0, delta_ = 0.0;
  std::vector<int> cnt_, cnt_s_;
  std::vector<double> w_, l1_, l2_, pw_, pwmin_;
  std::vector<double> w_s_, l1_s_, l2_s_, pw_s_, pwmin_s_;
};

double truncated_uniform_width(double center, double half_width) {
  return (center + half_width) - std::max(0.0, center - half_width);
}

}  // namespace

void MhConfig::validate() const {
  if (n_iter < 1 || burn_in < 0 || burn_in >= n_iter)
    throw std::invalid_argument("MhConfig: require 0 <= burn_in < n_iter");
  if (!(epsilon > 0.0) || !(xi > 0.0) || !(eta > 0.0))
    throw std::invalid_argument("MhConfig: proposal widths must be > 0");
  if (!(init_alpha > 0.0) || !(init_gamma > 0.0) || !(init_delta >= 0.0))
    throw std::invalid_argument("MhConfig: invalid initial point");
  double s = move_probs[0] + move_probs[1] + move_probs[2];
  if (std::abs(s - 1.0) > 1e-12)
    throw std::invalid_argument("MhConfig: move probabilities must sum to 1");
}

double acceptance_log_ratio(MhMove move, const GGRicianParams& current,
                            const GGRicianParams& candidate,
                            double loglik_current, double loglik_candidate,
                            const MhConfig& cfg) {
  double lr = loglik_candidate - loglik_current;
  switch (move) {
    case MhMove::m1_delta:
      lr += std::log(truncated_uniform_width(current.delta, cfg.epsilon)) -
            std::log(truncated_uniform_width(candidate.delta, cfg.epsilon));
      break;
    case MhMove::m2_gamma:
      // Jeffreys prior ratio p(g*)/p(g) = g/g*, plus the positive-mass
      // renormalizers of the truncated Gaussian proposal
      lr += std::log(current.gamma / candidate.gamma);
      lr += std::log(normal_cdf(current.gamma / cfg.xi)) -
            std::log(normal_cdf(candidate.gamma / cfg.xi));
      break;
    case MhMove::m3_alpha:
      lr += std::log(truncated_uniform_width(current.alpha, cfg.eta)) -
            std::log(truncated_uniform_width(candidate.alpha, cfg.eta));
      break;
  }
  return lr;
}

FitResult mh_fit(const SampleSet& s, const MhConfig& cfg,
                 const QuadratureRule& q) {
  s.validate();
  cfg.validate();
  auto [mn, mx] = std::minmax_element(s.values.begin(), s.values.end());
  if (*mn == *mx)
    throw std::runtime_error(
        "mh_fit: degenerate data (all samples identical); scale estimation "
        "would collapse");

  ChainLikelihood lik(s, q);
  GGRicianParams state{cfg.init_alpha, cfg.init_gamma, cfg.init_delta};
  double ll = lik.init(state.alpha, state.gamma, state.delta);
  if (!std::isfinite(ll))
    throw std::runtime_error(
        "mh_fit: log-likelihood is not finite at the initial point "
        "(alpha=" + std::to_string(state.alpha) +
        ", delta=" + std::to_string(state.delta) +
        ", gamma=" + std::to_string(state.gamma) + ")");

  RngStream rng(cfg.seed, cfg.stream_id);
  FitResult out;
  out.burn_in = cfg.burn_in;
  out.alpha_trace.reserve(cfg.n_iter);
  out.delta_trace.reserve(cfg.n_iter);
  out.gamma_trace.reserve(cfg.n_iter);
  out.loglik_trace.reserve(cfg.n_iter);
  out.move_trace.reserve(cfg.n_iter);
  out.accept_trace.reserve(cfg.n_iter);

  for (int it = 0; it < cfg.n_iter; ++it) {
    double mu = rng.uniform();
    MhMove move = (mu < cfg.move_probs[0])
                      ? MhMove::m1_delta
                      : (mu < cfg.move_probs[0] + cfg.move_probs[1]
                             ? MhMove::m2_gamma
                             : MhMove::m3_alpha);
    GGRicianParams cand = state;
    double cand_ll = kNegInf;
    switch (move) {
      case MhMove::m1_delta: {
        cand.delta = rng.uniform(std::max(0.0, state.delta - cfg.epsilon),
                                 state.delta + cfg.epsilon);
        cand_ll = lik.eval_delta(cand.delta);
        break;
      }
      case MhMove::m2_gamma: {
        do {
          cand.gamma = state.gamma + cfg.xi * rng.normal();
        } while (cand.gamma <= 0.0);
        cand_ll = lik.eval_gamma(cand.gamma);
        break;
      }
      case MhMove::m3_alpha: {
        cand.alpha = rng.uniform(std::max(0.0, state.alpha - cfg.eta),
                                 state.alpha + cfg.eta);
        if (cand.alpha <= 0.0) cand.alpha = 1e-12;
        cand_ll = lik.eval_alpha(cand.alpha);
        break;
      }
    }
    ++out.proposed[static_cast<int>(move)];
    double log_a = acceptance_log_ratio(move, state, cand, ll, cand_ll, cfg);
    bool accept = std::isfinite(cand_ll) && std::log(rng.uniform()) <= log_a;
    if (accept) {
      switch (move) {
        case MhMove::m1_delta: lik.accept_delta(cand.delta); break;
        case MhMove::m2_gamma: lik.accept_gamma(cand.gamma); break;
        case MhMove::m3_alpha: lik.accept_alpha(cand.alpha); break;
      }
      state = cand;
      ll = cand_ll;
      ++out.accepted[static_cast<int>(move)];
    }
    out.alpha_trace.push_back(state.alpha);
    out.delta_trace.push_back(state.delta);
    out.gamma_trace.push_back(state.gamma);
    out.loglik_trace.push_back(ll);
    out.move_trace.push_back(static_cast<int>(move));
    out.accept_trace.push_back(accept ? 1 : 0);
  }
  out.final_loglik = ll;
  posterior_summary(out, cfg.burn_in, out.posterior_mean, out.posterior_std);
  return out;
}

void posterior_summary(const FitResult& f, int burn_in,
                       std::array<double, 3>& means,
                       std::array<double, 3>& stds) {
  int n = static_cast<int>(f.alpha_trace.size());
  if (burn_in < 0 || burn_in >= n)
    throw std::invalid_argument("posterior_summary: burn_in out of range");
  const std::vector<double>* traces[3] = {&f.alpha_trace, &f.delta_trace,
                                          &f.gamma_trace};
  for (int k = 0; k < 3; ++k) {
    double sum = 0.0;
    for (int i = burn_in; i < n; ++i) sum += (*traces[k])[i];
    double mean = sum / (n - burn_in);
    double var = 0.0;
    for (int i = burn_in; i < n; ++i) {
      double d = (*traces[k])[i] - mean;
      var += d * d;
    }
    means[k] = mean;
    stds[k] = std::sqrt(var / (n - burn_in));
  }
}

namespace {

struct ParamVec {
  std::vector<double> v;
  std::vector<double> lo;  // lower bounds (exclusive); -inf for free
};

ModelSpec make_reference_spec(Family family, const std::vector<double>& v,
                              const ReferenceFitConfig& cfg) {
  switch (family) {
    case Family::rician: return ModelSpec::rician(v[0], v[1]);
    case Family::rayleigh: return ModelSpec::rayleigh(v[0]);
    case Family::nakagami_rice: return ModelSpec::nakagami_rice(v[0], v[1]);
    case Family::weibull: return ModelSpec::weibull(v[0], v[1]);
    case Family::lognormal: return ModelSpec::lognormal(v[0], v[1]);
    case Family::g0:
      // beta = -alpha kept positive internally
      return ModelSpec::g0(cfg.fit_looks ? v[2] : cfg.looks, v[1], -v[0]);
    case Family::ggamma: return ModelSpec::ggamma(v[0], v[1], v[2]);
    case Family::stable_rayleigh:
      return ModelSpec::stable_rayleigh(v[0], v[1]);
    case Family::gamma_looks: return ModelSpec::gamma_looks(v[0], v[1]);
    case Family::exponential: return ModelSpec::exponential(v[0]);
    case Family::laplace_rician: return ModelSpec::laplace_rician(v[0], v[1]);
    case Family::ggr: return ModelSpec::ggr(v[0], v[1]);
    default:
      throw std::invalid_argument(
          "fit_reference: use mh_fit for the GG-Rician family");
  }
}

ParamVec initial_reference_params(Family family, const SampleSet& s,
                                  const ReferenceFitConfig& cfg) {
  const auto& x = s.values;
  double n = static_cast<double>(x.size());
  double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double m2 = 0.0;
  for (double v : x) m2 += v * v;
  m2 /= n;
  double var = std::max(m2 - mean * mean, 1e-12);

  double log_mean = 0.0, log_var = 0.0;
  std::size_t n_pos = 0;
  for (double v : x)
    if (v > 0.0) {
      log_mean += std::log(v);
      ++n_pos;
    }
  if (n_pos > 0) log_mean /= n_pos;
  for (double v : x)
    if (v > 0.0) {
      double d = std::log(v) - log_mean;
      log_var += d * d;
    }
  if (n_pos > 1) log_var /= n_pos;
  double log_std = std::sqrt(std::max(log_var, 1e-12));

  switch (family) {
    case Family::rician:
      return {{std::sqrt(var), mean}, {0.0, 0.0}};
    case Family::rayleigh:
      return {{std::sqrt(0.5 * m2)}, {0.0}};
    case Family::nakagami_rice:
      return {{std::max(var, 1e-6), std::sqrt(std::max(mean, 1e-12))},
              {0.0, 0.0}};
    case Family::weibull: {
      double a0 = std::clamp(M_PI / (std::sqrt(6.0) * log_std), 0.2, 20.0);
      return {{a0, std::max(mean, 1e-6)}, {0.0, 0.0}};
    }
    case Family::lognormal:
      return {{log_mean, log_std},
              {-std::numeric_limits<double>::infinity(), 0.0}};
    case Family::g0:
      // v = (beta, gamma [, L])
      if (cfg.fit_looks)
        return {{2.0, std::max(m2, 1e-6), cfg.looks}, {1.0, 0.0, 0.0}};
      return {{2.0, std::max(m2, 1e-6)}, {1.0, 0.0}};
    case Family::ggamma:
      return {{1.0, std::max(mean, 1e-6), 1.0}, {0.0, 0.0, 0.0}};
    case Family::stable_rayleigh:
      return {{1.8, std::max(0.25 * m2, 1e-6)}, {0.0, 0.0}};
    case Family::gamma_looks:
      return {{std::clamp(mean * mean / var, 1.0, 50.0),
               1.0 / std::max(mean, 1e-12)},
              {1.0, 0.0}};
    case Family::exponential:
      return {{1.0 / std::max(mean, 1e-12)}, {0.0}};
    case Family::laplace_rician:
      return {{std::max(std::sqrt(var), 1e-6), mean / std::sqrt(2.0)},
              {0.0, 0.0}};
    case Family::ggr:
      return {{1.5, std::sqrt(std::max(m2, 1e-12))}, {0.0, 0.0}};
    default:
      throw std::invalid_argument("fit_reference: unsupported family");
  }
}

bool reference_params_valid(Family family, const std::vector<double>& v,
                            const ParamVec& pv) {
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!(v[k] > pv.lo[k]) && std::isfinite(pv.lo[k])) return false;
  if (family == Family::stable_rayleigh && v[0] > 2.0) return false;
  // keep G0 beta > 1 so the density stays normalizable with finite mean
  return true;
}

}  // namespace

ModelSpec fit_reference(Family family, const SampleSet& s,
                        const ReferenceFitConfig& cfg,
                        const QuadratureRule& q) {
  s.validate();
  ParamVec pv = initial_reference_params(family, s, cfg);
  RngStream rng(cfg.seed, cfg.stream_id);

  auto loglik = [&](const std::vector<double>& v) -> double {
    if (!reference_params_valid(family, v, pv)) return kNegInf;
    ModelSpec m = make_reference_spec(family, v, cfg);
    return log_likelihood(m, s, q);
  };

  std::vector<double> cur = pv.v;
  double ll = loglik(cur);
  if (!std::isfinite(ll)) {
    // nudge the start until the likelihood is finite
    for (int tries = 0; tries < 50 && !std::isfinite(ll); ++tries) {
      for (auto& v : cur) v *= 1.3;
      ll = loglik(cur);
    }
    if (!std::isfinite(ll))
      throw std::runtime_error("fit_reference: could not find a finite "
                               "starting likelihood for " +
                               make_reference_spec(family, pv.v, cfg).name());
  }
  std::vector<double> best = cur;
  double best_ll = ll;

  for (int it = 0; it < cfg.n_iter; ++it) {
    std::vector<double> cand = cur;
    for (std::size_t k = 0; k < cand.size(); ++k) {
      double w = std::max(cfg.proposal_frac * std::abs(cur[k]),
                          cfg.proposal_floor);
      cand[k] += w * rng.normal();
    }
    double cll = loglik(cand);
    if (std::isfinite(cll) && std::log(rng.uniform()) <= cll - ll) {
      cur = cand;
      ll = cll;
      if (ll > best_ll) {
        best_ll = ll;
        best = cur;
      }
    }
  }
  return make_reference_spec(family, best, cfg);
}

double nmse(const GGRicianParams& truth, const GGRicianParams& est) {
  double num = (est.alpha - truth.alpha) * (est.alpha - truth.alpha) +
               (est.gamma - truth.gamma) * (est.gamma - truth.gamma) +
               (est.delta - truth.delta) * (est.delta - truth.delta);
  double den = truth.alpha * truth.alpha + truth.gamma * truth.gamma +
               truth.delta * truth.delta;
  return num / den;
}

void write_trace_csv(const FitResult& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path);
  out << "iteration,alpha,delta,gamma,loglik,move,accepted\n";
  out.precision(17);
  for (std::size_t i = 0; i < f.alpha_trace.size(); ++i) {
    out << i + 1 << ',' << f.alpha_trace[i] << ',' << f.delta_trace[i] << ','
        << f.gamma_trace[i] << ',' << f.loglik_trace[i] << ','
        << "M" << f.move_trace[i] + 1 << ',' << int(f.accept_trace[i]) << '\n';
  }
}

}  // namespace ggr
