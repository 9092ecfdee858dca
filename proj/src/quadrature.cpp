#include "ggr/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace ggr {
namespace {

constexpr double kTwoPi = 6.28318530717958647692;

// Kronrod 15-point nodes/weights on [-1,1] (abscissae >= 0; symmetric).
constexpr double kKronrodX[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kKronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
// Gauss 7-point weights matching kKronrodX[1], [3], [5], [7].
constexpr double kGaussW[4] = {0.129484966168870, 0.279705391489277,
                               0.381830050505119, 0.417959183673469};

struct PanelResult {
  double integral;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = f(c);
  double kron = fc * kKronrodW[7];
  double gauss = fc * kGaussW[3];
  for (int i = 0; i < 7; ++i) {
    double x = h * kKronrodX[i];
    double fsum = f(c - x) + f(c + x);
    kron += fsum * kKronrodW[i];
    if (i % 2 == 1) gauss += fsum * kGaussW[i / 2];
  }
  kron *= h;
  gauss *= h;
  return {kron, std::abs(kron - gauss)};
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int depth) {
  PanelResult r = gk15(f, a, b);
  double tol = abs_tol + rel_tol * std::abs(r.integral);
  if (r.error <= tol || depth <= 0) return r.integral;
  double c = 0.5 * (a + b);
  return integrate_rec(f, a, c, 0.5 * abs_tol, rel_tol, depth - 1) +
         integrate_rec(f, c, b, 0.5 * abs_tol, rel_tol, depth - 1);
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess, Newton on P_n
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

QuadratureRule::QuadratureRule(int node_count) : node_count_(node_count) {
  if (node_count < 2)
    throw std::invalid_argument("QuadratureRule: node count must be >= 2");
  gauss_legendre(node_count, base_x_, base_w_);
  theta_x_.resize(node_count);
  theta_w_.resize(node_count);
  for (int i = 0; i < node_count; ++i) {
    theta_x_[i] = 0.5 * kTwoPi * (base_x_[i] + 1.0);
    theta_w_[i] = 0.5 * kTwoPi * base_w_[i];
  }
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, double rel_tol,
                          int max_depth) {
  if (a == b) return 0.0;
  return integrate_rec(f, a, b, abs_tol, rel_tol, max_depth);
}

}  // namespace ggr
