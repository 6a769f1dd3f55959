#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "reslab/errors.hpp"
#include "reslab/oscillatory.hpp"

using namespace reslab;

namespace {
constexpr double pi = std::numbers::pi;

OscIntegralSpec fresnel(double t) {
  OscIntegralSpec s;
  s.psi = [](double x) { return x * x; };
  s.dpsi = [](double x) { return 2.0 * x; };
  s.amplitude = [](double x) { return cplx(std::exp(-x * x)); };
  s.cutoff = {0.0, 8.0, CutoffShape::Indicator};
  s.t = t;
  return s;
}

cplx gauss(double x, double c, double w) { return std::exp(-(x - c) * (x - c) / (w * w)) * std::polar(1.0, 0.3 * x); }
}  // namespace

TEST_CASE("Gaussian and Fresnel values") {
  CHECK(std::abs(quadrature_oscillatory(fresnel(0.0)) - std::sqrt(pi)) < 1e-12);
  for (double t : {1.0, 10.0, 100.0, 1000.0}) {
    const cplx exact = std::sqrt(cplx(pi) / cplx(1.0, -t));
    CHECK(std::abs(quadrature_oscillatory(fresnel(t)) - exact) < 1e-10);
  }
  auto zero = fresnel(10.0);
  zero.amplitude = [](double) { return cplx{}; };
  CHECK(quadrature_oscillatory(zero) == cplx{});
  auto bad = fresnel(1.0);
  bad.cutoff.radius = 0.0;
  CHECK_THROWS_AS(quadrature_oscillatory(bad), InvalidArgument);
}

TEST_CASE("panel budget is enforced") {
  QuadratureOptions opt;
  opt.max_panels = 10;
  CHECK_THROWS_AS(quadrature_oscillatory(fresnel(1e4), opt), ResolutionError);
}

TEST_CASE("stationary-phase leading term") {
  auto s = fresnel(1e4);
  const cplx l = stationary_phase_leading(s, 0.0, 2.0);
  CHECK(std::abs(l) == doctest::Approx(std::sqrt(pi) / 100.0).epsilon(1e-14));
  CHECK(std::abs(l) == doctest::Approx(0.0177245).epsilon(1e-5));
  CHECK(std::arg(l) == doctest::Approx(pi / 4).epsilon(1e-14));
  CHECK(std::abs(quadrature_oscillatory(s) - l) < 1e-3 * std::abs(l));
  CHECK(stationary_phase_constant(-1.0) == std::conj(stationary_phase_constant(1.0)));

  auto vanish = s;
  vanish.amplitude = [](double x) { return cplx(x * std::exp(-x * x)); };
  CHECK(stationary_phase_leading(vanish, 0.0, 2.0) == cplx{});
  CHECK_THROWS_AS(stationary_phase_leading(s, 0.0, 1e-13), DegenerateStationaryPoint);
}

TEST_CASE("remainder decays like t^{-3/4} for an H^1 amplitude") {
  std::vector<double> ts, err;
  for (double t = 100.0; t <= 1e4 * 1.0001; t *= std::sqrt(10.0)) {
    auto s = fresnel(t);
    s.amplitude = [](double x) { return cplx((1.0 + std::pow(std::abs(x), 0.6)) * std::exp(-x * x)); };
    s.breakpoints = {0.0};
    ts.push_back(t);
    err.push_back(std::abs(quadrature_oscillatory(s) - stationary_phase_leading(s, 0.0, 2.0)));
  }
  const double slope = oracle::loglog_slope(ts, err);
  MESSAGE("remainder exponent " << slope);
  CHECK(std::abs(slope + 0.75) <= 0.15);

  // smooth Gaussian: remainder * t^{3/4} stays bounded
  double hi = 0.0;
  for (double t : {1e2, 1e3, 1e4}) {
    auto s = fresnel(t);
    hi = std::max(hi, std::abs(quadrature_oscillatory(s) - stationary_phase_leading(s, 0.0, 2.0)) * std::pow(t, 0.75));
  }
  CHECK(hi < 1.0);
}

TEST_CASE("non-stationary bound") {
  OscIntegralSpec s;
  s.psi = [](double x) { return x; };
  s.dpsi = [](double) { return 1.0; };
  s.amplitude = [](double x) { return cplx(std::exp(-x * x)); };
  s.cutoff = {2.0, 1.0, CutoffShape::Indicator};
  s.t = 50.0;
  const double b = nonstationary_bound(s, 1.0);
  CHECK(std::abs(quadrature_oscillatory(s)) <= b);
  auto s2 = s;
  s2.t = 100.0;
  CHECK(nonstationary_bound(s2, 1.0) == doctest::Approx(0.5 * b).epsilon(1e-14));
  CHECK_THROWS_AS(nonstationary_bound(s, 0.0), InvalidFloor);
  CHECK_THROWS_AS(nonstationary_bound(s, -1.0), InvalidFloor);
}

TEST_CASE("non-stationary bound on random specs") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    // psi' = a + 2 c2 (x - ctr) >= m on the support, by construction
    const double m = 0.2 + 2.0 * u(rng), c2 = (u(rng) - 0.5) * 0.5 * m, rho = 0.5 + 3.5 * u(rng);
    const double ctr = 4.0 * (u(rng) - 0.5), a = m + 2.0 * std::abs(c2) * rho;
    const double w = 0.3 + 2.0 * u(rng), x0 = ctr + 2.0 * (u(rng) - 0.5), k = 6.0 * u(rng);
    OscIntegralSpec s;
    s.psi = [=](double x) { return a * (x - ctr) + c2 * (x - ctr) * (x - ctr); };
    s.dpsi = [=](double x) { return a + 2.0 * c2 * (x - ctr); };
    s.amplitude = [=](double x) { return std::polar(std::exp(-(x - x0) * (x - x0) / (w * w)), k * x); };
    s.cutoff = {ctr, rho, static_cast<CutoffShape>(i % 3)};
    s.t = 5.0 + 195.0 * u(rng);
    const double ratio = std::abs(quadrature_oscillatory(s)) / nonstationary_bound(s, m);
    worst = std::max(worst, ratio);
    CHECK(ratio <= 1.0);
  }
  MESSAGE("largest |I| / bound " << worst);
}

TEST_CASE("cutoff shapes") {
  for (auto sh : {CutoffShape::Indicator, CutoffShape::Bump, CutoffShape::Plateau}) {
    const Cutoff c{1.0, 2.0, sh};
    CHECK(c(1.0) == 1.0);
    CHECK(c(3.5) == 0.0);
    CHECK(c(-1.5) == 0.0);
    CHECK(c(0.3) == c(1.7));
    for (double x = -1.0; x <= 3.0; x += 0.01) {
      CHECK(c(x) >= 0.0);
      CHECK(c(x) <= 1.0);
    }
  }
  const Cutoff p{0.0, 1.0, CutoffShape::Plateau};
  CHECK(p(0.5) == 1.0);
  CHECK(p(0.75) == doctest::Approx(0.5));
  // C^1 at the edge of the support
  const Cutoff b{0.0, 1.0, CutoffShape::Bump};
  CHECK(std::abs(oracle::derivative([&](double x) { return b(x); }, 1.0 - 1e-4, 1e-6)) < 1e-6);
  CHECK(std::abs(oracle::derivative([&](double x) { return p(x); }, 1.0 - 1e-4, 1e-6)) < 1e-5);
}

TEST_CASE("duhamel kernel at s = 0 is a convolution") {
  const PhaseParams q{1, 2, 4, -1, 1};
  auto fm = [](double e) { return gauss(e, 0.5, 1.2); };
  auto fn = [](double e) { return gauss(e, -0.3, 0.9); };
  const std::vector<double> xi{-2.0, -0.4, 0.0, 1.1, 3.0};
  const auto k = duhamel_kernel(fm, fn, q, 0.0, 1, xi, -12.0, 12.0);
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double x = xi[i];
    const cplx ref = oracle::simpson(
        [&](double e) { return fm(e) / std::sqrt(e * e + 4.0) * fn(x - e) / std::sqrt((x - e) * (x - e) + 6.0); },
        std::max(-12.0, x - 12.0), std::min(12.0, x + 12.0), 4000);
    CHECK(std::abs(k[i] - ref) < 1e-8);
  }

  auto z = [](double) { return cplx{}; };
  for (const auto& v : duhamel_kernel(fm, z, q, 10.0, 1, xi, -12.0, 12.0)) CHECK(v == cplx{});
}

TEST_CASE("duhamel kernel bilinearity and conjugation") {
  const PhaseParams q{0, 1, 3, 1, -1};
  auto f1 = [](double e) { return gauss(e, 0.2, 1.0); };
  auto f2 = [](double e) { return gauss(e, -1.0, 0.7) * cplx(0.0, 1.0); };
  auto g = [](double e) { return gauss(e, 0.4, 1.5); };
  const cplx a(0.7, -0.2), b(-1.3, 0.4);
  auto comb = [&](double e) { return a * f1(e) + b * f2(e); };
  const std::vector<double> xi{-1.5, 0.0, 0.8, 2.5};
  const double s = 7.0;
  const auto k1 = duhamel_kernel(f1, g, q, s, 1, xi, -10, 10);
  const auto k2 = duhamel_kernel(f2, g, q, s, 1, xi, -10, 10);
  const auto kc = duhamel_kernel(comb, g, q, s, 1, xi, -10, 10);
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const cplx lin = a * k1[i] + b * k2[i];
    CHECK(std::abs(kc[i] - lin) <= 1e-12 * (std::abs(k1[i]) + std::abs(k2[i]) + 1e-3));
  }

  // Real-space-real data: f(-xi) = conj f(xi). Then flipping sign and xi conjugates.
  auto rf = [](double e) { return std::exp(-e * e) * std::polar(1.0, 0.5 * e); };
  auto rg = [](double e) { return std::exp(-0.5 * (e - 0.1) * (e - 0.1)) + std::exp(-0.5 * (e + 0.1) * (e + 0.1)) * cplx(1.0, 0.0); };
  const std::vector<double> pos{0.3, 1.2, 2.0}, neg{-0.3, -1.2, -2.0};
  const auto kp = duhamel_kernel(rf, rg, q, s, 1, pos, -10, 10);
  const auto kn = duhamel_kernel(rf, rg, q, s, -1, neg, -10, 10);
  for (std::size_t i = 0; i < pos.size(); ++i) CHECK(std::abs(kn[i] - std::conj(kp[i])) <= 1e-11 * std::abs(kp[i]) + 1e-15);
}

TEST_CASE("duhamel kernel approaches the stationary-phase term at large s") {
  // (0,0,3) with alpha = beta = -1: phi vanishes on eta = xi / 2.
  const PhaseParams q{0, 0, 3, -1, -1};
  auto f = [](double e) { return cplx(std::exp(-0.5 * e * e)); };
  const std::vector<double> xi{-1.0, 0.0, 0.7, 1.5};
  for (double s : {200.0, 800.0}) {
    const auto k = duhamel_kernel(f, f, q, s, 1, xi, -12.0, 12.0);
    for (std::size_t i = 0; i < xi.size(); ++i) {
      const double x = xi[i], e = lambda_coeff(0, 0, -1, -1) * x;
      const double d2 = d2_at_stationary(q, x);
      CHECK(std::abs(phase(q, x, e)) < 1e-12);
      const cplx amp = f(e) / mode_bracket(e, 0) * f(x - e) / mode_bracket(x - e, 0);
      const cplx lead = stationary_phase_constant(d2) / std::sqrt(s * std::abs(d2)) * amp;
      CHECK(std::abs(k[i] - lead) < 0.05 * std::abs(lead));
    }
  }
}
