#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "reslab/phase_analysis.hpp"
#include "reslab/spectral_transform.hpp"

namespace reslab {

enum class CutoffShape {
  Indicator,  // 1 on [c - rho, c + rho]
  Bump,       // (1 - r^2)^3, r = (x - c) / rho; C^2
  Plateau,    // 1 for |r| <= 1/2, quintic smoothstep taper to 0 at |r| = 1; C^2
};

struct Cutoff {
  double center = 0.0;
  double radius = 1.0;
  CutoffShape shape = CutoffShape::Indicator;

  double operator()(double x) const;
  double lo() const { return center - radius; }
  double hi() const { return center + radius; }
};

/// Integral of e^{i t psi(x)} F(x) chi(x) dx.
struct OscIntegralSpec {
  std::function<double(double)> psi;
  std::function<double(double)> dpsi;  // optional; centered differences of psi otherwise
  std::function<cplx(double)> amplitude;
  Cutoff cutoff;
  double t = 0.0;
  /// Points where F is not smooth; panels never straddle them.
  std::vector<double> breakpoints;
};

struct QuadratureOptions {
  double phase_per_panel = 3.0;  // max t |psi'| h per panel, radians
  double tol = 1e-13;
  double resolution_tol = 1e-9;
  long max_panels = 2'000'000;
  int max_depth = 48;
};

/// Gauss-Legendre panels sized by the local oscillation, adaptive bisection
/// inside each panel, and a resolution-doubling check. Throws ResolutionError
/// when the panel budget is exceeded or doubling changes the value by more
/// than resolution_tol relative.
cplx quadrature_oscillatory(const OscIntegralSpec& spec, const QuadratureOptions& opt = {});

/// sqrt(2 pi) e^{i pi/4 sgn}.
cplx stationary_phase_constant(double psi_dd);

/// sqrt(2 pi / (t |psi''|)) e^{i pi/4 sgn psi''} e^{i t psi(x0)} chi(x0) F(x0).
/// Throws DegenerateStationaryPoint when |psi''| < 1e-12.
cplx stationary_phase_leading(const OscIntegralSpec& spec, double x0, double psi_dd_at_x0);

/// sqrt(rho) / (t m) (||F||_2 + ||F'||_2) over the cutoff support.
/// Throws InvalidFloor for m <= 0.
double nonstationary_bound(const OscIntegralSpec& spec, double gradient_floor);

using SpectralFunction = std::function<cplx(double)>;

/// For each xi: integral over eta of
/// e^{i sign s phi(xi, eta)} fm(eta) / <eta>_m * fn(xi - eta) / <xi - eta>_n,
/// with fm, fn supported in [lo, hi].
std::vector<cplx> duhamel_kernel(const SpectralFunction& fm, const SpectralFunction& fn, const PhaseParams& q,
                                 double s, int sign, const std::vector<double>& xi, double lo, double hi,
                                 const QuadratureOptions& opt = {});

/// Same with fm, fn given as coefficient arrays on the grid (band-limited interpolation).
std::vector<cplx> duhamel_kernel(const Grid& grid, const cplx* fm, const cplx* fn, const PhaseParams& q, double s,
                                 int sign, const std::vector<double>& xi, const QuadratureOptions& opt = {});

}  // namespace reslab
