#ifndef GGR_ESTIMATION_HPP_
#define GGR_ESTIMATION_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ggr/distributions.hpp"
#include "ggr/sample_set.hpp"

namespace ggr {

enum class MhMove { m1_delta = 0, m2_gamma = 1, m3_alpha = 2 };

/// Metropolis-Hastings configuration; defaults follow the estimation
/// hyper-parameters used throughout (1000 iterations, 500 burn-in,
/// epsilon 2.5, xi 3, eta 0.5, start at alpha 2, delta 10, gamma 10,
/// equiprobable moves).
struct MhConfig {
  int n_iter = 1000;
  int burn_in = 500;
  double epsilon = 2.5;  // delta proposal half-width
  double xi = 3.0;       // gamma proposal standard deviation
  double eta = 0.5;      // alpha proposal half-width
  double init_alpha = 2.0;
  double init_delta = 10.0;
  double init_gamma = 10.0;
  std::array<double, 3> move_probs{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  void validate() const;
};

struct FitResult {
  std::vector<double> alpha_trace, delta_trace, gamma_trace, loglik_trace;
  std::vector<int> move_trace;          // 0/1/2
  std::vector<std::uint8_t> accept_trace;
  std::array<long, 3> proposed{};
  std::array<long, 3> accepted{};
  int burn_in = 0;
  std::array<double, 3> posterior_mean{};  // alpha, delta, gamma
  std::array<double, 3> posterior_std{};
  double final_loglik = 0.0;
};

/// Three-move MH sampler for GG-Rician parameters. Throws
/// std::runtime_error if the initial point has -inf log-likelihood.
FitResult mh_fit(const SampleSet& s, const MhConfig& cfg,
                 const QuadratureRule& q);

/// ln of the MH ratio before min(1, .): likelihood difference, the Jeffreys
/// prior ratio for the gamma move, and the boundary-truncation correction of
/// the proposal densities. Accept iff ln u <= returned value.
double acceptance_log_ratio(MhMove move, const GGRicianParams& current,
                            const GGRicianParams& candidate,
                            double loglik_current, double loglik_candidate,
                            const MhConfig& cfg);

/// Mean and population standard deviation over post-burn-in iterations.
/// Returned in (alpha, delta, gamma) order.
void posterior_summary(const FitResult& f, int burn_in,
                       std::array<double, 3>& means,
                       std::array<double, 3>& stds);

struct ReferenceFitConfig {
  int n_iter = 3000;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  double looks = 1.0;      // fixed L for G0 / Gamma unless fit_looks
  bool fit_looks = false;
  double proposal_frac = 0.10;  // step std as a fraction of magnitude
  double proposal_floor = 1e-3;
};

/// Random-walk MH over a reference family with flat positive-support
/// priors; returns the highest-likelihood parameter vector visited.
ModelSpec fit_reference(Family family, const SampleSet& s,
                        const ReferenceFitConfig& cfg, const QuadratureRule& q);

/// sum((est - true)^2) / sum(true^2) over (alpha, gamma, delta).
double nmse(const GGRicianParams& truth, const GGRicianParams& est);

/// Chain trace CSV: iteration, alpha, delta, gamma, loglik, move, accepted.
void write_trace_csv(const FitResult& f, const std::string& path);

}  // namespace ggr

#endif  // GGR_ESTIMATION_HPP_
