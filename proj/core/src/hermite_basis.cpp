#include "reslab/hermite_basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "reslab/errors.hpp"

namespace reslab {

namespace {

constexpr double kRescale = 1e150;
const double kLogRescale = std::log(kRescale);

double scaled(double v, double log_scale) {
  if (v == 0.0) return 0.0;
  if (log_scale > -600.0) return v * std::exp(log_scale);
  return std::copysign(std::exp(std::log(std::abs(v)) + log_scale), v);
}

}  // namespace

void hermite_eval_all(int nmax, double x, double* out) {
  if (nmax < 0) return;
  // Recurrence on v_k = phi_k * exp(-log_scale); rescaled when it grows.
  double log_scale = -0.5 * x * x - 0.25 * std::log(std::numbers::pi);
  double prev = 0.0;
  double cur = 1.0;
  out[0] = scaled(cur, log_scale);
  for (int k = 0; k < nmax; ++k) {
    const double next = x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(double(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += kLogRescale;
    }
    out[k + 1] = scaled(cur, log_scale);
  }
}

std::vector<double> hermite_eval_all(int nmax, double x) {
  std::vector<double> out(static_cast<std::size_t>(std::max(nmax, 0) + 1));
  hermite_eval_all(nmax, x, out.data());
  return out;
}

double hermite_eval(int n, double x) {
  if (n < 0) throw InvalidArgument("hermite_eval: negative mode index");
  return hermite_eval_all(n, x)[static_cast<std::size_t>(n)];
}

double hermite_derivative(int n, double x) {
  if (n < 0) throw InvalidArgument("hermite_derivative: negative mode index");
  const auto v = hermite_eval_all(n, x);
  const double lower = n > 0 ? std::sqrt(2.0 * n) * v[static_cast<std::size_t>(n - 1)] : 0.0;
  return lower - x * v[static_cast<std::size_t>(n)];
}

double hermite_norm_constant(int n) {
  const double log_sq = n * std::log(2.0) + std::lgamma(n + 1.0) + 0.5 * std::log(std::numbers::pi);
  return std::exp(0.5 * log_sq);
}

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw InvalidArgument("gauss_hermite: need at least one node");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  if (n == 1) {
    rule.nodes[0] = 0.0;
  } else {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    for (int i = 0; i < n; ++i) rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  }

  std::vector<double> phi(static_cast<std::size_t>(n + 1));
  for (auto& x : rule.nodes) {
    for (int it = 0; it < 4; ++it) {
      hermite_eval_all(n, x, phi.data());
      const double d = std::sqrt(2.0 * n) * phi[static_cast<std::size_t>(n - 1)] - x * phi[static_cast<std::size_t>(n)];
      if (d == 0.0) break;
      const double step = phi[static_cast<std::size_t>(n)] / d;
      x -= step;
      if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
  }
  std::sort(rule.nodes.begin(), rule.nodes.end());
  for (int i = 0; i < n / 2; ++i) {
    auto& lo = rule.nodes[static_cast<std::size_t>(i)];
    auto& hi = rule.nodes[static_cast<std::size_t>(n - 1 - i)];
    const double a = 0.5 * (hi - lo);
    lo = -a;
    hi = a;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;

  // Christoffel-Darboux: sum_{k<n} phi_k(x_i)^2 = n phi_{n-1}(x_i)^2 at roots of phi_n.
  rule.weights.resize(rule.nodes.size());
  rule.function_weights.resize(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    hermite_eval_all(n - 1, x, phi.data());
    const double last = phi[static_cast<std::size_t>(n - 1)];
    const double fw = 1.0 / (n * last * last);
    rule.function_weights[i] = fw;
    rule.weights[i] = fw * std::exp(-x * x);
  }
  return rule;
}

HermiteBasis::HermiteBasis(int max_mode, int n_nodes) : max_mode_(max_mode) {
  if (max_mode < 0) throw InvalidArgument("HermiteBasis: max_mode must be >= 0");
  if (n_nodes <= 0) n_nodes = max_mode + 1;
  rule_ = gauss_hermite(n_nodes);
  norm_constants_.resize(static_cast<std::size_t>(max_mode + 1));
  for (int p = 0; p <= max_mode; ++p) norm_constants_[static_cast<std::size_t>(p)] = hermite_norm_constant(p);

  const std::size_t nn = node_count();
  values_.assign(static_cast<std::size_t>(max_mode + 1) * nn, 0.0);
  std::vector<double> phi(static_cast<std::size_t>(max_mode + 1));
  for (std::size_t i = 0; i < nn; ++i) {
    hermite_eval_all(max_mode, rule_.nodes[i], phi.data());
    for (int p = 0; p <= max_mode; ++p) values_[static_cast<std::size_t>(p) * nn + i] = phi[static_cast<std::size_t>(p)];
  }
}

double HermiteBasis::inner(int m, int n) const {
  double s = 0.0;
  for (std::size_t i = 0; i < node_count(); ++i) s += rule_.function_weights[i] * value(m, i) * value(n, i);
  return s;
}

double eigen_residual(int n, const std::vector<double>& grid) {
  if (n < 0) throw InvalidArgument("eigen_residual: negative mode index");
  if (grid.size() < 9) throw GridTooCoarse("eigen_residual: need at least 9 grid points");
  const double h = grid[1] - grid[0];
  if (!(h > 0.0)) throw GridTooCoarse("eigen_residual: grid must be increasing");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs(grid[i] - grid[i - 1] - h) > 1e-6 * h) throw GridTooCoarse("eigen_residual: grid must be uniform");
  }
  if (h > 0.1) throw GridTooCoarse("eigen_residual: spacing " + std::to_string(h) + " > 0.1");
  const double extent = grid.back() - grid.front();
  if (extent < 2.0 * std::sqrt(2.0 * n + 2.0)) {
    throw GridTooCoarse("eigen_residual: extent " + std::to_string(extent) + " below 2 sqrt(2n+2)");
  }

  static constexpr double c[5] = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = hermite_eval(n, grid[i]);
  double worst = 0.0;
  for (std::size_t i = 4; i + 4 < grid.size(); ++i) {
    double d2 = c[0] * f[i];
    for (std::size_t k = 1; k <= 4; ++k) d2 += c[k] * (f[i - k] + f[i + k]);
    d2 /= h * h;
    const double x = grid[i];
    worst = std::max(worst, std::abs(-d2 + x * x * f[i] - (2.0 * n + 1.0) * f[i]));
  }
  return worst;
}

namespace {

// Gauss-Hermite rule in y with physical abscissae x = sqrt(2/3) y.
struct ScaledRule {
  std::vector<double> x;
  std::vector<double> w;  // sqrt(2/3) * function weight
};

ScaledRule make_scaled_rule(int order) {
  const auto rule = gauss_hermite(order);
  ScaledRule s;
  const double c = std::sqrt(2.0 / 3.0);
  s.x.resize(rule.nodes.size());
  s.w.resize(rule.nodes.size());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    s.x[k] = c * rule.nodes[k];
    s.w[k] = c * rule.function_weights[k];
  }
  return s;
}

const ScaledRule& cached_rule(int order) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<ScaledRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<ScaledRule>(make_scaled_rule(order));
  return *slot;
}

int default_order(int sum) { return (sum + 1) / 2 + 1; }

}  // namespace

double triple_product(int m, int n, int p) {
  return triple_product(m, n, p, default_order(m + n + p));
}

double triple_product(int m, int n, int p, int order) {
  if (m < 0 || n < 0 || p < 0) throw InvalidArgument("triple_product: negative mode index");
  if ((m + n + p) % 2 != 0) return 0.0;
  int s[3] = {m, n, p};
  std::sort(s, s + 3);
  const auto& rule = cached_rule(std::max(order, 1));
  std::vector<double> phi(static_cast<std::size_t>(s[2] + 1));
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.x.size(); ++k) {
    hermite_eval_all(s[2], rule.x[k], phi.data());
    acc += rule.w[k] * phi[static_cast<std::size_t>(s[0])] * phi[static_cast<std::size_t>(s[1])] *
           phi[static_cast<std::size_t>(s[2])];
  }
  return acc;
}

std::size_t TripleProductTable::index(int a, int b, int c) {
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  const auto m = static_cast<std::size_t>(a);
  const auto n = static_cast<std::size_t>(b);
  const auto p = static_cast<std::size_t>(c);
  return p * (p + 1) * (p + 2) / 6 + n * (n + 1) / 2 + m;
}

TripleProductTable::TripleProductTable(int max_mode, int order) : max_mode_(max_mode) {
  if (max_mode < 0) throw InvalidArgument("TripleProductTable: max_mode must be >= 0");
  order_ = order > 0 ? order : default_order(3 * max_mode);
  const ScaledRule rule = make_scaled_rule(order_);
  const std::size_t modes = static_cast<std::size_t>(max_mode + 1);
  const std::size_t nk = rule.x.size();
  std::vector<double> phi(modes * nk);
  std::vector<double> col(modes);
  for (std::size_t k = 0; k < nk; ++k) {
    hermite_eval_all(max_mode, rule.x[k], col.data());
    for (std::size_t q = 0; q < modes; ++q) phi[q * nk + k] = col[q];
  }
  entries_.assign(index(max_mode, max_mode, max_mode) + 1, 0.0);
  for (int p = 0; p <= max_mode; ++p) {
    for (int n = 0; n <= p; ++n) {
      for (int m = 0; m <= n; ++m) {
        if ((m + n + p) % 2 != 0) continue;
        const double* a = &phi[static_cast<std::size_t>(m) * nk];
        const double* b = &phi[static_cast<std::size_t>(n) * nk];
        const double* c = &phi[static_cast<std::size_t>(p) * nk];
        double acc = 0.0;
        for (std::size_t k = 0; k < nk; ++k) acc += rule.w[k] * a[k] * b[k] * c[k];
        entries_[index(m, n, p)] = acc;
      }
    }
  }
}

std::vector<TripleProductTable::Row> TripleProductTable::rows() const {
  std::vector<Row> out;
  out.reserve(entries_.size());
  for (int m = 0; m <= max_mode_; ++m)
    for (int n = m; n <= max_mode_; ++n)
      for (int p = n; p <= max_mode_; ++p) out.push_back({m, n, p, (*this)(m, n, p)});
  return out;
}

double interaction_bound_ratio(int m, int n, int p, int K, double nu, double beta) {
  if (!(m <= n && n <= p) || m < 0) throw InvalidArgument("interaction_bound_ratio: need 0 <= m <= n <= p");
  if (!(nu > 0.125)) throw InvalidArgument("interaction_bound_ratio: nu must exceed 1/8");
  if (!(beta >= 0.0 && beta < 1.0 / 24.0)) throw InvalidArgument("interaction_bound_ratio: beta must lie in [0, 1/24)");
  const double um = std::max(1, m);
  const double un = std::max(1, n);
  const double up = std::max(1, p);
  const double root = std::sqrt(um * un);
  const double scale = std::pow(um, nu) / std::pow(up, beta) * std::pow(root / (root + (p - n)), K);
  return std::abs(triple_product(m, n, p)) / scale;
}

}  // namespace reslab
