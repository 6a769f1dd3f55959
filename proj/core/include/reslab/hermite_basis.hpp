#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace reslab {

/// Normalized Hermite function phi_n(x), eigenfunction of -d^2/dx^2 + x^2
/// with eigenvalue 2n+1.
double hermite_eval(int n, double x);

/// phi_0(x) .. phi_nmax(x) into out[0..nmax]. Stable for large x and n.
void hermite_eval_all(int nmax, double x, double* out);
std::vector<double> hermite_eval_all(int nmax, double x);

/// phi_n'(x) = sqrt(2n) phi_{n-1}(x) - x phi_n(x).
double hermite_derivative(int n, double x);

/// L2 norm of the unnormalized psi_n = (-1)^n e^{x^2/2} d^n/dx^n e^{-x^2}:
/// (2^n n! sqrt(pi))^{1/2}.
double hermite_norm_constant(int n);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;           // against e^{-x^2}
  std::vector<double> function_weights;  // weights * e^{x^2}, for plain integrals of phi products
};

/// Gauss-Hermite rule of n points.
QuadratureRule gauss_hermite(int n);

class HermiteBasis {
 public:
  /// n_nodes defaults to max_mode + 1, enough to integrate phi_m phi_n exactly
  /// for m, n <= max_mode.
  explicit HermiteBasis(int max_mode, int n_nodes = 0);

  int max_mode() const { return max_mode_; }
  int mode_count() const { return max_mode_ + 1; }
  std::size_t node_count() const { return rule_.nodes.size(); }

  const std::vector<double>& nodes() const { return rule_.nodes; }
  const std::vector<double>& weights() const { return rule_.weights; }
  const std::vector<double>& function_weights() const { return rule_.function_weights; }
  const std::vector<double>& norm_constants() const { return norm_constants_; }

  /// phi_p at node i.
  double value(int p, std::size_t i) const { return values_[static_cast<std::size_t>(p) * node_count() + i]; }

  /// Eigenvalue of -d^2/dx^2 + x^2 + 1 on mode p.
  static double eigenvalue(int p) { return 2.0 * p + 2.0; }

  /// Integral of phi_m phi_n with this rule.
  double inner(int m, int n) const;

 private:
  int max_mode_;
  QuadratureRule rule_;
  std::vector<double> norm_constants_;
  std::vector<double> values_;
};

/// max |(-d^2/dx^2 + x^2 - (2n+1)) phi_n| over interior points of a uniform
/// grid, using an 8th-order second-difference stencil.
/// Throws GridTooCoarse if spacing > 0.1, the extent is below 2 sqrt(2n+2),
/// or the grid has fewer than 9 points.
double eigen_residual(int n, const std::vector<double>& grid);

/// Integral of phi_m phi_n phi_p, exact Gauss-Hermite after x = sqrt(2/3) y.
/// The order defaults to ceil((m+n+p)/2) + 1.
double triple_product(int m, int n, int p);
double triple_product(int m, int n, int p, int order);

class TripleProductTable {
 public:
  /// All entries with indices <= max_mode. order = 0 picks the minimal
  /// exact order for the largest index sum.
  explicit TripleProductTable(int max_mode, int order = 0);

  int max_mode() const { return max_mode_; }
  int built_with() const { return order_; }

  /// Symmetric in its arguments; exactly 0 for odd m+n+p.
  double operator()(int m, int n, int p) const { return entries_[index(m, n, p)]; }

  /// Rows (m, n, p, value) with m <= n <= p, lexicographic.
  struct Row {
    int m, n, p;
    double value;
  };
  std::vector<Row> rows() const;

 private:
  static std::size_t index(int a, int b, int c);

  int max_mode_;
  int order_;
  std::vector<double> entries_;
};

/// |M(m,n,p)| / [ (m^nu / p^beta) (sqrt(mn) / (sqrt(mn) + p - n))^K ] with
/// m, n, p replaced by max(1, .). Requires m <= n <= p.
double interaction_bound_ratio(int m, int n, int p, int K, double nu, double beta);

}  // namespace reslab
