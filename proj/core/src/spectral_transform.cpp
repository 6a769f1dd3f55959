#include "reslab/spectral_transform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/FFT>

#include "reslab/errors.hpp"
#include "reslab/parallel.hpp"

namespace reslab {

namespace {

Eigen::FFT<double>& local_fft() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::Unscaled);
    return f;
  }();
  return fft;
}

double bracket(double xi) { return std::sqrt(1.0 + xi * xi); }

double sum_sq(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

// 8th-order centered stencils on the frequency grid, zero outside the window.
constexpr double kD1[5] = {0.0, 4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
constexpr double kD2[5] = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};

std::vector<cplx> diff_xi(const Grid& grid, const std::vector<cplx>& f, int order) {
  const int n = grid.n();
  const double h = grid.dxi();
  auto at = [&](int k) { return (k < 0 || k >= n) ? cplx{} : f[static_cast<std::size_t>(k)]; };
  std::vector<cplx> out(f.size());
  for (int k = 0; k < n; ++k) {
    cplx acc{};
    if (order == 1) {
      for (int s = 1; s <= 4; ++s) acc += kD1[s] * (at(k + s) - at(k - s));
      out[static_cast<std::size_t>(k)] = acc / h;
    } else {
      acc = kD2[0] * at(k);
      for (int s = 1; s <= 4; ++s) acc += kD2[s] * (at(k + s) + at(k - s));
      out[static_cast<std::size_t>(k)] = acc / (h * h);
    }
  }
  return out;
}

}  // namespace

Grid::Grid(int n_x1, double length_x1) : n_(n_x1), length_(length_x1) {
  if (n_x1 < 16 || (n_x1 & (n_x1 - 1)) != 0) {
    throw InvalidArgument("Grid: n_x1 must be a power of two >= 16, got " + std::to_string(n_x1));
  }
  if (!(length_x1 > 0.0)) throw InvalidArgument("Grid: length_x1 must be positive");
}

bool Grid::retained(int k) const {
  const int kappa = std::abs(k - n_ / 2);
  return 3 * kappa < n_;
}

void fourier_forward(const Grid& grid, const cplx* in, cplx* out) {
  const int n = grid.n();
  const int h = n / 2;
  std::vector<cplx> src(in, in + n);
  std::vector<cplx> dst;
  local_fft().fwd(dst, src);
  const double dx = grid.dx();
  for (int k = 0; k < n; ++k) {
    const int d = ((k - h) % n + n) % n;
    const double sign = ((k - h) % 2 == 0) ? 1.0 : -1.0;
    out[k] = dx * sign * dst[static_cast<std::size_t>(d)];
  }
}

void fourier_inverse(const Grid& grid, const cplx* in, cplx* out) {
  const int n = grid.n();
  const int h = n / 2;
  std::vector<cplx> src(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const int d = ((k - h) % n + n) % n;
    const double sign = ((k - h) % 2 == 0) ? 1.0 : -1.0;
    src[static_cast<std::size_t>(d)] = sign * in[k];
  }
  std::vector<cplx> dst;
  local_fft().inv(dst, src);
  const double scale = 1.0 / grid.length();
  for (int j = 0; j < n; ++j) out[j] = scale * dst[static_cast<std::size_t>(j)];
}

std::vector<cplx> fourier_forward(const Grid& grid, const std::vector<cplx>& in) {
  std::vector<cplx> out(in.size());
  fourier_forward(grid, in.data(), out.data());
  return out;
}

std::vector<cplx> fourier_inverse(const Grid& grid, const std::vector<cplx>& in) {
  std::vector<cplx> out(in.size());
  fourier_inverse(grid, in.data(), out.data());
  return out;
}

FourierHermiteTransform::FourierHermiteTransform(Grid grid, std::shared_ptr<const HermiteBasis> basis)
    : grid_(grid), basis_(std::move(basis)) {
  if (!basis_) throw InvalidArgument("FourierHermiteTransform: null basis");
}

ModeField FourierHermiteTransform::forward(const PhysicalField& f, TransformReport* report) const {
  const int n = grid_.n();
  const int nx2 = static_cast<int>(basis_->node_count());
  if (f.n_x1 != n || f.n_x2 != nx2) throw InvalidArgument("forward: field shape does not match grid");

  if (report) {
    double peak = 0.0;
    double edge = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < nx2; ++i) peak = std::max(peak, std::abs(f(j, i)));
      edge = std::max({edge, std::abs(f(j, 0)), std::abs(f(j, nx2 - 1))});
    }
    report->boundary_ratio = peak > 0.0 ? edge / peak : 0.0;
    report->confined = report->boundary_ratio <= 1e-12;
  }

  // x1 transform per x2 node, then project onto modes.
  std::vector<cplx> rows(static_cast<std::size_t>(nx2) * n);
  parallel_for(nx2, [&](std::ptrdiff_t i) {
    std::vector<cplx> line(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) line[static_cast<std::size_t>(j)] = f(j, static_cast<int>(i));
    fourier_forward(grid_, line.data(), rows.data() + i * n);
  });

  const int P = modes();
  ModeField out(P, n);
  const auto& W = basis_->function_weights();
  parallel_for(P, [&](std::ptrdiff_t p) {
    cplx* dst = out.mode(static_cast<int>(p));
    for (int i = 0; i < nx2; ++i) {
      const double w = W[static_cast<std::size_t>(i)] * basis_->value(static_cast<int>(p), static_cast<std::size_t>(i));
      const cplx* src = rows.data() + static_cast<std::size_t>(i) * n;
      for (int k = 0; k < n; ++k) dst[k] += w * src[k];
    }
  });
  return out;
}

PhysicalField FourierHermiteTransform::inverse(const ModeField& c) const {
  const int n = grid_.n();
  const int nx2 = static_cast<int>(basis_->node_count());
  if (c.n != n || c.P > modes()) throw InvalidArgument("inverse: coefficient shape does not match grid");
  std::vector<cplx> lines(static_cast<std::size_t>(c.P) * n);
  parallel_for(c.P, [&](std::ptrdiff_t p) {
    fourier_inverse(grid_, c.mode(static_cast<int>(p)), lines.data() + p * n);
  });
  PhysicalField f(n, nx2);
  parallel_for(n, [&](std::ptrdiff_t j) {
    for (int i = 0; i < nx2; ++i) {
      cplx acc{};
      for (int p = 0; p < c.P; ++p) acc += basis_->value(p, static_cast<std::size_t>(i)) * lines[static_cast<std::size_t>(p) * n + j];
      f(static_cast<int>(j), i) = acc;
    }
  });
  return f;
}

double FourierHermiteTransform::l2_physical(const PhysicalField& f) const {
  const auto& W = basis_->function_weights();
  double s = 0.0;
  for (int j = 0; j < f.n_x1; ++j)
    for (int i = 0; i < f.n_x2; ++i) s += W[static_cast<std::size_t>(i)] * std::norm(f(j, i));
  return std::sqrt(grid_.dx() * s);
}

double FourierHermiteTransform::l2_modes(const ModeField& c) const {
  return std::sqrt(grid_.dxi() * sum_sq(c.data) / (2.0 * Grid::kPi));
}

BandLimitedInterpolant::BandLimitedInterpolant(const Grid& grid, const cplx* coeffs)
    : grid_(grid), samples_(static_cast<std::size_t>(grid.n())) {
  fourier_inverse(grid, coeffs, samples_.data());
  for (auto& s : samples_) s *= grid.dx();
}

bool BandLimitedInterpolant::in_range(double xi) const {
  const double lo = grid_.xi_min();
  return xi >= lo * (1.0 + 1e-12) && xi <= -lo * (1.0 + 1e-12);
}

cplx BandLimitedInterpolant::operator()(double xi) const {
  if (!in_range(xi)) {
    throw InterpolationRangeError("interpolation point " + std::to_string(xi) + " outside the frequency window");
  }
  const int n = grid_.n();
  const cplx step = std::polar(1.0, -grid_.dx() * xi);
  cplx rot = std::polar(1.0, -grid_.x(0) * xi);
  cplx acc{};
  // Re-anchor the rotation every 64 terms to bound drift.
  for (int j = 0; j < n; ++j) {
    if (j % 64 == 0) rot = std::polar(1.0, -grid_.x(j) * xi);
    acc += samples_[static_cast<std::size_t>(j)] * rot;
    rot *= step;
  }
  return acc;
}

cplx interpolate(const Grid& grid, const cplx* coeffs, double xi) {
  return BandLimitedInterpolant(grid, coeffs)(xi);
}

double sobolev_weighted_norm(const Grid& grid, const cplx* f, double N, int kappa, WeightPath path) {
  if (N < 0.0) throw InvalidArgument("sobolev_weighted_norm: N must be >= 0");
  if (kappa < 0 || kappa > 2) throw InvalidArgument("sobolev_weighted_norm: kappa must be 0, 1 or 2");
  const int n = grid.n();
  std::vector<cplx> v(f, f + n);
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) w[static_cast<std::size_t>(k)] = std::pow(bracket(grid.xi(k)), N);

  auto weighted = [&](const std::vector<cplx>& g) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += std::norm(w[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(k)]);
    return s * grid.dxi();
  };

  if (kappa == 0) return std::sqrt(weighted(v));
  if (kappa == 1) {
    std::vector<cplx> d;
    if (path == WeightPath::Physical) {
      // (x f)^ = i d/dxi f^, and |i| = 1.
      auto phys = fourier_inverse(grid, v);
      for (int j = 0; j < n; ++j) phys[static_cast<std::size_t>(j)] *= grid.x(j);
      d = fourier_forward(grid, phys);
    } else {
      d = diff_xi(grid, v, 1);
    }
    return std::sqrt(weighted(v) + weighted(d));
  }
  std::vector<cplx> d2;
  if (path == WeightPath::Physical) {
    auto phys = fourier_inverse(grid, v);
    for (int j = 0; j < n; ++j) phys[static_cast<std::size_t>(j)] *= grid.x(j) * grid.x(j);
    d2 = fourier_forward(grid, phys);
    for (auto& z : d2) z = -z;
  } else {
    d2 = diff_xi(grid, v, 2);
  }
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] -= d2[static_cast<std::size_t>(k)];
  return std::sqrt(weighted(v));
}

double sobolev_weighted_norm(const Grid& grid, const std::vector<cplx>& f, double N, int kappa, WeightPath path) {
  if (static_cast<int>(f.size()) != grid.n()) throw InvalidArgument("sobolev_weighted_norm: size mismatch");
  return sobolev_weighted_norm(grid, f.data(), N, kappa, path);
}

double tilde_hn_mode(const Grid& grid, const cplx* f, int p, double N) {
  double s = 0.0;
  for (int k = 0; k < grid.n(); ++k) {
    const double xi = grid.xi(k);
    s += std::norm(std::pow(xi * xi + 2.0 * p + 2.0, N) * f[k]);
  }
  return std::sqrt(s * grid.dxi());
}

std::vector<cplx> apply_resolvent(const Grid& grid, const cplx* f, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("apply_resolvent: lambda must be positive");
  std::vector<cplx> out(static_cast<std::size_t>(grid.n()));
  for (int k = 0; k < grid.n(); ++k) {
    const double xi = grid.xi(k);
    out[static_cast<std::size_t>(k)] = f[k] / std::sqrt(xi * xi + lambda);
  }
  return out;
}

double tilde_hn_norm(const SpectralState& state, const Grid& grid, int c, double N) {
  double s = 0.0;
  for (int p = 0; p < state.modes(); ++p) {
    const double v = tilde_hn_mode(grid, state.mode(c, p), p, N);
    s += v * v;
  }
  return std::sqrt(s);
}

double hm_hn_norm(const SpectralState& state, const Grid& grid, int c, double M, double N) {
  double s = 0.0;
  for (int p = 0; p < state.modes(); ++p) {
    const double v = std::pow(2.0 * p + 2.0, M) * sobolev_weighted_norm(grid, state.mode(c, p), N, 0);
    s += v * v;
  }
  return std::sqrt(s);
}

CompositeNorms composite_norms(const SpectralState& state, const Grid& grid, double M, double N, double t) {
  if (t < 0.0) throw InvalidArgument("composite_norms: t must be >= 0");
  CompositeNorms out;
  const double decay = 1.0 / std::sqrt(bracket(t));
  for (int c = 0; c < 2; ++c) {
    double b = 0.0;
    double cb = 0.0;
    for (int p = 0; p < state.modes(); ++p) {
      const double v = sobolev_weighted_norm(grid, state.mode(c, p), 1.5, 1);
      b += v * v;
      const double wv = std::pow(2.0 * p + 2.0, M) * v;
      cb += wv * wv;
    }
    const double th = tilde_hn_norm(state, grid, c, N);
    out.tilde_HN += th;
    out.HM_HN += hm_hn_norm(state, grid, c, M, N);
    out.B_t += decay * std::sqrt(b);
    out.calB_t += decay * std::sqrt(cb);
    out.S_MN_t += th + decay * std::sqrt(cb);
  }
  return out;
}

double hm_l2_distance(const SpectralState& a, const SpectralState& b, const Grid& grid, double M0) {
  if (a.modes() != b.modes() || a.samples() != b.samples()) throw InvalidArgument("hm_l2_distance: shape mismatch");
  double total = 0.0;
  for (int c = 0; c < 2; ++c) {
    double s = 0.0;
    for (int p = 0; p < a.modes(); ++p) {
      double m = 0.0;
      const cplx* x = a.mode(c, p);
      const cplx* y = b.mode(c, p);
      for (int k = 0; k < a.samples(); ++k) m += std::norm(x[k] - y[k]);
      s += std::pow(2.0 * p + 2.0, 2.0 * M0) * m * grid.dxi();
    }
    total += std::sqrt(s);
  }
  return total;
}

void impose_reality(SpectralState& state, const Grid& grid) {
  for (int p = 0; p < state.modes(); ++p) {
    state(0, p, 0) = 0.0;
    state(1, p, 0) = 0.0;
    for (int k = 1; k < grid.n(); ++k) state(1, p, k) = std::conj(state(0, p, grid.mirror(k)));
  }
}

double reality_defect(const SpectralState& state, const Grid& grid) {
  double worst = 0.0;
  for (int p = 0; p < state.modes(); ++p)
    for (int k = 1; k < grid.n(); ++k)
      worst = std::max(worst, std::abs(state(1, p, k) - std::conj(state(0, p, grid.mirror(k)))));
  return worst;
}

}  // namespace reslab
