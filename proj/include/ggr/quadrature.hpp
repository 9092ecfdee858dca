#ifndef GGR_QUADRATURE_HPP_
#define GGR_QUADRATURE_HPP_

#include <functional>
#include <vector>

namespace ggr {

/// Gauss-Legendre nodes and weights on [-1, 1], ascending nodes.
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// Fixed Gauss-Legendre rule for the theta integral of the GG-Rician pdf.
/// The rule is applied piecewise between the kink angles of the integrand,
/// so the base [-1, 1] table is the working representation; theta_nodes()
/// and theta_weights() expose the plain rule mapped onto [0, 2pi].
class QuadratureRule {
 public:
  explicit QuadratureRule(int node_count = 256);

  int node_count() const { return node_count_; }
  const std::vector<double>& base_nodes() const { return base_x_; }
  const std::vector<double>& base_weights() const { return base_w_; }
  const std::vector<double>& theta_nodes() const { return theta_x_; }
  const std::vector<double>& theta_weights() const { return theta_w_; }

 private:
  int node_count_;
  std::vector<double> base_x_, base_w_;
  std::vector<double> theta_x_, theta_w_;
};

/// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b].
/// Recursion stops when the panel error estimate is below
/// abs_tol + rel_tol * |integral|.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol = 1e-10,
                          double rel_tol = 1e-10, int max_depth = 50);

}  // namespace ggr

#endif  // GGR_QUADRATURE_HPP_
