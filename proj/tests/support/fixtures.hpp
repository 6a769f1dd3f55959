#pragma once

// Setups shared by the unit tests and the acceptance run.

#include <algorithm>
#include <cmath>

#include "leapfrog.hpp"
#include "oracles.hpp"
#include "reslab/evolution.hpp"

namespace oracle {

// u(x1, x2) or u_t at time t summed straight from the profile, without
// FullSolver::reconstruct.
inline double field_at(const reslab::SpectralState& s, const reslab::Grid& g, double t, double x1, double x2,
                       bool velocity) {
  using reslab::cplx;
  double val = 0.0;
  for (int p = 0; p < s.modes(); ++p) {
    cplx acc{};
    for (int k = 1; k < g.n(); ++k) {
      const double w = std::sqrt(g.xi(k) * g.xi(k) + 2.0 * p + 2.0);
      const cplx up = std::polar(1.0, w * t) * s(0, p, k);
      const cplx um = std::polar(1.0, -w * t) * s(1, p, k);
      const cplx h = velocity ? 0.5 * (up + um) : (up - um) / cplx(0.0, 2.0 * w);
      acc += h * std::polar(1.0, x1 * g.xi(k));
    }
    val += acc.real() / g.length() * hermite_function(p, x2);
  }
  return val;
}

struct LeapfrogGap {
  double rel;
  double nonlinear_share;  // |u(1) - linear u(1)| / |u(1)|
};

// Relative L2 gap at t = 1 between the spectral solver (64 x1 points, P
// modes) and the leapfrog, for data scaled to max |u| = umax.
inline LeapfrogGap leapfrog_gap(int P, double umax_target) {
  using namespace reslab;
  SimConfig c;
  c.P = P;
  c.n_x1 = 64;
  c.length_x1 = 40.0;
  c.M = 0.0;
  c.N = 0.0;
  c.eps = 0.2;
  const Grid g(c.n_x1, c.length_x1);
  FullSolver fs(g, c.P);
  auto st = init_profile(c);
  double umax = 0.0;
  for (double x1 = -20.0; x1 < 20.0; x1 += 0.5)
    for (double x2 = -4.0; x2 <= 4.0; x2 += 0.25) umax = std::max(umax, std::abs(field_at(st, g, 0.0, x1, x2, false)));
  for (auto& z : st.data()) z *= umax_target / umax;

  Leapfrog lf({}, [&](double a, double b) { return field_at(st, g, 0.0, a, b, false); },
              [&](double a, double b) { return field_at(st, g, 0.0, a, b, true); });
  lf.advance_to(1.0);
  auto sf = st;
  for (int i = 0; i < 100; ++i) fs.step(sf, 0.01);

  double num = 0.0, den = 0.0, nl = 0.0;
  for (int i = 0; i < lf.n1(); i += 4)
    for (int k = 0; k < lf.n2(); ++k) {
      const double v = field_at(sf, g, 1.0, lf.x1(i), lf.x2(k), false);
      const double v0 = field_at(st, g, 1.0, lf.x1(i), lf.x2(k), false);
      num += std::pow(v - lf.u(i, k), 2);
      den += v * v;
      nl += std::pow(v - v0, 2);
    }
  return {std::sqrt(num / den), std::sqrt(nl / den)};
}

}  // namespace oracle
