#include "reslab/oscillatory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "reslab/errors.hpp"
#include "reslab/parallel.hpp"

namespace reslab {

namespace {

struct GaussLegendre {
  static constexpr int kPoints = 20;
  std::array<double, kPoints> x{};
  std::array<double, kPoints> w{};

  GaussLegendre() {
    const int n = kPoints;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[static_cast<std::size_t>(i)] = z;
      w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

const GaussLegendre& gl() {
  static const GaussLegendre rule;
  return rule;
}

template <class F>
cplx panel(const F& f, double a, double b) {
  const auto& r = gl();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  cplx s{};
  for (int i = 0; i < GaussLegendre::kPoints; ++i) s += r.w[static_cast<std::size_t>(i)] * f(mid + half * r.x[static_cast<std::size_t>(i)]);
  return s * half;
}

template <class F>
cplx adapt(const F& f, double a, double b, cplx whole, double abs_tol, int depth, int max_depth) {
  const double m = 0.5 * (a + b);
  const cplx l = panel(f, a, m);
  const cplx r = panel(f, m, b);
  if (std::abs(l + r - whole) <= abs_tol || depth >= max_depth || m <= a || m >= b) return l + r;
  return adapt(f, a, m, l, abs_tol, depth + 1, max_depth) + adapt(f, m, b, r, abs_tol, depth + 1, max_depth);
}

std::vector<double> segments(const OscIntegralSpec& spec) {
  const Cutoff& c = spec.cutoff;
  std::vector<double> pts{c.lo(), c.hi()};
  if (c.shape == CutoffShape::Plateau) {
    pts.push_back(c.center - 0.5 * c.radius);
    pts.push_back(c.center + 0.5 * c.radius);
  }
  for (double b : spec.breakpoints)
    if (b > c.lo() && b < c.hi()) pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double dpsi_at(const OscIntegralSpec& spec, double x) {
  if (spec.dpsi) return spec.dpsi(x);
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  return (spec.psi(x + h) - spec.psi(x - h)) / (2.0 * h);
}

struct PassResult {
  cplx value;
  long panels;
};

PassResult integrate_pass(const OscIntegralSpec& spec, const std::vector<double>& cuts, double phase_per_panel,
                          double abs_tol, const QuadratureOptions& opt) {
  auto f = [&](double x) -> cplx {
    const double chi = spec.cutoff(x);
    if (chi == 0.0) return {};
    return std::polar(1.0, spec.t * spec.psi(x)) * spec.amplitude(x) * chi;
  };
  PassResult out{{}, 0};
  const double t = std::abs(spec.t);
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s];
    const double b = cuts[s + 1];
    const double cap = (b - a) * (phase_per_panel / 12.0);
    double x = a;
    while (x < b) {
      const double d0 = t * std::abs(dpsi_at(spec, x));
      double h = std::min(cap, d0 > 0.0 ? phase_per_panel / d0 : cap);
      const double d1 = t * std::abs(dpsi_at(spec, std::min(x + h, b)));
      if (d1 > 0.0) h = std::min(h, phase_per_panel / d1);
      if (b - x - h < 1e-3 * h) h = b - x;
      const double e = (h == b - x) ? b : x + h;
      if (++out.panels > opt.max_panels) {
        throw ResolutionError("quadrature_oscillatory: more than " + std::to_string(opt.max_panels) +
                              " panels needed at t = " + std::to_string(spec.t));
      }
      out.value += adapt(f, x, e, panel(f, x, e), abs_tol, 0, opt.max_depth);
      x = e;
    }
  }
  return out;
}

}  // namespace

double Cutoff::operator()(double x) const {
  const double r = std::abs(x - center) / radius;
  if (r > 1.0) return 0.0;
  switch (shape) {
    case CutoffShape::Indicator: return 1.0;
    case CutoffShape::Bump: {
      const double u = 1.0 - r * r;
      return u * u * u;
    }
    case CutoffShape::Plateau: {
      if (r <= 0.5) return 1.0;
      const double u = 2.0 * (1.0 - r);
      return std::min(1.0, u * u * u * (10.0 - 15.0 * u + 6.0 * u * u));
    }
  }
  return 0.0;
}

cplx quadrature_oscillatory(const OscIntegralSpec& spec, const QuadratureOptions& opt) {
  if (!spec.psi || !spec.amplitude) throw InvalidArgument("quadrature_oscillatory: psi and amplitude are required");
  if (!(spec.cutoff.radius > 0.0)) throw InvalidArgument("quadrature_oscillatory: cutoff radius must be positive");
  const auto cuts = segments(spec);

  // Scale for the absolute tolerance: integral of |F chi|.
  double scale = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s];
    const double h = (cuts[s + 1] - a) / 64.0;
    for (int k = 0; k < 64; ++k) {
      scale += std::abs(panel([&](double x) { return cplx(std::abs(spec.amplitude(x)) * spec.cutoff(x)); }, a + k * h,
                              a + (k + 1) * h));
    }
  }
  if (scale == 0.0) return {};
  const double abs_tol = opt.tol * scale;

  const auto coarse = integrate_pass(spec, cuts, opt.phase_per_panel, abs_tol, opt);
  const auto fine = integrate_pass(spec, cuts, 0.5 * opt.phase_per_panel, abs_tol, opt);
  // floor at 1e-3 scale: a cancelling integral is only resolvable to ~tol * scale
  const double ref = std::max(std::abs(fine.value), 1e-3 * scale);
  if (std::abs(fine.value - coarse.value) > opt.resolution_tol * ref) {
    throw ResolutionError("quadrature_oscillatory: resolution doubling changed the result by " +
                          std::to_string(std::abs(fine.value - coarse.value) / ref) + " relative");
  }
  return fine.value;
}

cplx stationary_phase_constant(double psi_dd) {
  const double sgn = psi_dd > 0.0 ? 1.0 : -1.0;
  return std::sqrt(2.0 * std::numbers::pi) * std::polar(1.0, 0.25 * std::numbers::pi * sgn);
}

cplx stationary_phase_leading(const OscIntegralSpec& spec, double x0, double psi_dd_at_x0) {
  if (!(spec.t > 0.0)) throw InvalidArgument("stationary_phase_leading: t must be positive");
  if (std::abs(psi_dd_at_x0) < 1e-12) {
    throw DegenerateStationaryPoint("stationary_phase_leading: |psi''(x0)| below 1e-12");
  }
  const double chi = spec.cutoff(x0);
  if (chi == 0.0) return {};
  const cplx amp = spec.amplitude(x0);
  if (amp == cplx{}) return {};
  return stationary_phase_constant(psi_dd_at_x0) / std::sqrt(spec.t * std::abs(psi_dd_at_x0)) *
         std::polar(1.0, spec.t * spec.psi(x0)) * chi * amp;
}

double nonstationary_bound(const OscIntegralSpec& spec, double gradient_floor) {
  if (!(gradient_floor > 0.0)) throw InvalidFloor("nonstationary_bound: gradient floor must be positive");
  if (!(spec.t > 0.0)) throw InvalidArgument("nonstationary_bound: t must be positive");
  const auto cuts = segments(spec);
  double f2 = 0.0;
  double d2 = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s];
    const double h = (cuts[s + 1] - a) / 256.0;
    for (int k = 0; k < 256; ++k) {
      f2 += panel([&](double x) { return cplx(std::norm(spec.amplitude(x))); }, a + k * h, a + (k + 1) * h).real();
      d2 += panel(
                [&](double x) {
                  const double e = 1e-5 * std::max(1.0, std::abs(x));
                  return cplx(std::norm((spec.amplitude(x + e) - spec.amplitude(x - e)) / (2.0 * e)));
                },
                a + k * h, a + (k + 1) * h)
                .real();
    }
  }
  return std::sqrt(spec.cutoff.radius) / (spec.t * gradient_floor) * (std::sqrt(f2) + std::sqrt(d2));
}

std::vector<cplx> duhamel_kernel(const SpectralFunction& fm, const SpectralFunction& fn, const PhaseParams& q,
                                 double s, int sign, const std::vector<double>& xi, double lo, double hi,
                                 const QuadratureOptions& opt) {
  q.validate();
  if (sign != 1 && sign != -1) throw InvalidArgument("duhamel_kernel: sign must be +1 or -1");
  std::vector<cplx> out(xi.size());
  parallel_for(static_cast<std::ptrdiff_t>(xi.size()), [&](std::ptrdiff_t i) {
    const double x = xi[static_cast<std::size_t>(i)];
    const double a = std::max(lo, x - hi);
    const double b = std::min(hi, x - lo);
    if (!(b > a)) return;
    OscIntegralSpec spec;
    spec.t = s;
    spec.psi = [&, x](double eta) { return sign * phase(q, x, eta); };
    spec.dpsi = [&, x](double eta) { return sign * dphase_deta(q, x, eta); };
    spec.amplitude = [&, x](double eta) {
      return fm(eta) / mode_bracket(eta, q.m) * fn(x - eta) / mode_bracket(x - eta, q.n);
    };
    spec.cutoff = {0.5 * (a + b), 0.5 * (b - a), CutoffShape::Indicator};
    out[static_cast<std::size_t>(i)] = quadrature_oscillatory(spec, opt);
  });
  return out;
}

std::vector<cplx> duhamel_kernel(const Grid& grid, const cplx* fm, const cplx* fn, const PhaseParams& q, double s,
                                 int sign, const std::vector<double>& xi, const QuadratureOptions& opt) {
  const BandLimitedInterpolant im(grid, fm);
  const BandLimitedInterpolant in(grid, fn);
  const double lo = grid.xi_min();
  const double hi = -lo;
  auto clamp = [lo, hi](double v) { return std::clamp(v, lo, hi); };
  return duhamel_kernel([&](double e) { return im(clamp(e)); }, [&](double e) { return in(clamp(e)); }, q, s, sign, xi,
                        lo, hi, opt);
}

}  // namespace reslab
