#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "fixtures.hpp"
#include "reslab/errors.hpp"
#include "reslab/evolution.hpp"

using namespace reslab;

namespace {
constexpr double pi = std::numbers::pi;

double dist(const SpectralState& a, const SpectralState& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += std::norm(a.data()[i] - b.data()[i]);
  return std::sqrt(s);
}

double norm(const SpectralState& a) {
  double s = 0.0;
  for (const auto& z : a.data()) s += std::norm(z);
  return std::sqrt(s);
}

double mode_l2(const SpectralState& s, int c, int p) {
  double acc = 0.0;
  for (int k = 0; k < s.samples(); ++k) acc += std::norm(s(c, p, k));
  return std::sqrt(acc);
}

SimConfig small_config() {
  SimConfig c;
  c.P = 6;
  c.n_x1 = 64;
  c.length_x1 = 40.0;
  c.M = 0.0;
  c.N = 0.0;
  c.eps = 0.2;
  return c;
}

}  // namespace

TEST_CASE("initial profile") {
  auto c = small_config();
  const Grid g(c.n_x1, c.length_x1);
  for (double eps : {0.05, 0.3}) {
    c.eps = eps;
    const auto s = init_profile(c);
    CHECK(composite_norms(s, g, c.M, c.N, 0.0).S_MN_t == doctest::Approx(eps / 2).epsilon(1e-12));
    CHECK(reality_defect(s, g) < 1e-15);
    for (int k = 0; k < g.n(); ++k)
      if (!g.retained(k)) CHECK(s(0, 0, k) == cplx{});
  }
  CHECK(dist(init_profile(c), init_profile(c)) == 0.0);
  auto other = c;
  other.seed = 99;
  CHECK(dist(init_profile(c), init_profile(other)) > 0.0);
  c.eps = 0.0;
  CHECK(norm(init_profile(c)) == 0.0);
  c.init_modes = {7};
  CHECK_THROWS_AS(init_profile(c), InvalidArgument);
}

TEST_CASE("linear flow conserves every mode") {
  auto c = small_config();
  const Grid g(c.n_x1, c.length_x1);
  FullSolver lin(g, c.P, {false, 1e6});
  auto s = init_profile(c);
  const auto s0 = s;
  for (int i = 0; i < 10000; ++i) lin.step(s, 0.01);
  CHECK(s.time == doctest::Approx(100.0).epsilon(1e-12));
  for (int cc = 0; cc < 2; ++cc)
    for (int p = 0; p < c.P; ++p) CHECK(std::abs(mode_l2(s, cc, p) - mode_l2(s0, cc, p)) <= 1e-12 * std::max(1e-300, mode_l2(s0, cc, p)));

  // physical fields at t = 100 turn back into the same profile
  const auto back = lin.from_fields(lin.reconstruct(s), s.time);
  CHECK(dist(back, s) <= 1e-12 * norm(s));
}

TEST_CASE("nonlinear flow preserves the reality constraint") {
  auto c = small_config();
  c.eps = 0.5;
  const Grid g(c.n_x1, c.length_x1);
  FullSolver fs(g, c.P);
  auto s = init_profile(c);
  for (int i = 0; i < 200; ++i) fs.step(s, 0.01);
  CHECK(norm(s) > 0.0);
  CHECK(reality_defect(s, g) < 1e-13 * norm(s));
  const auto f = fs.reconstruct(s);
  CHECK(f.u.size() == static_cast<std::size_t>(c.P * c.n_x1));
}

TEST_CASE("Strang splitting converges at second order") {
  auto c = small_config();
  const Grid g(c.n_x1, c.length_x1);
  FullSolver fs(g, c.P);
  const auto s0 = init_profile(c);
  auto run = [&](double dt) {
    auto s = s0;
    const int n = static_cast<int>(std::lround(2.0 / dt));
    for (int i = 0; i < n; ++i) fs.step(s, dt);
    return s;
  };
  for (double dt : {0.2, 0.1}) {
    const auto a = run(dt), b = run(dt / 2), d = run(dt / 4);
    const double ratio = dist(a, b) / dist(b, d);
    MESSAGE("full ratio at dt " << dt << ": " << ratio);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }
}

TEST_CASE("Heun stepping of the resonant system converges at second order") {
  const Grid g(64, 40.0);
  std::vector<std::vector<ResonantTriple>> lists(4);
  lists[3].push_back({0, 0, 3, -1, -1, 0.5, 1.0});
  lists[0].push_back({0, 3, 0, -1, 1, lambda_coeff(0, 3, -1, 1), 1.0});
  const ResonantSystem rs(g, 4, lists);
  auto c = small_config();
  c.P = 4;
  c.init_modes = {0, 3};
  c.eps = 2.0;
  auto g0 = init_profile(c);
  g0.time = 1.0;
  auto run = [&](double ds) {
    auto s = g0;
    const int n = static_cast<int>(std::lround(4.0 / ds));
    for (int i = 0; i < n; ++i) rs.step(s, ds);
    return s;
  };
  for (double ds : {0.4, 0.2}) {
    const auto a = run(ds), b = run(ds / 2), d = run(ds / 4);
    CHECK(dist(a, g0) > 1e-3 * norm(g0));
    const double ratio = dist(a, b) / dist(b, d);
    MESSAGE("resonant ratio at ds " << ds << ": " << ratio);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }
}

TEST_CASE("full solver against an independent leapfrog") {
  const auto six = oracle::leapfrog_gap(6, 0.05);
  MESSAGE("leapfrog gap, 6 modes: " << six.rel << ", nonlinear share " << six.nonlinear_share);
  CHECK(six.rel <= 1e-3);
  // the comparison must see the nonlinearity, not just the linear flow
  CHECK(six.nonlinear_share > 10.0 * six.rel);
  // What is left is Hermite truncation: phi_m phi_n feeds every higher mode.
  const auto twelve = oracle::leapfrog_gap(12, 0.05);
  MESSAGE("leapfrog gap, 12 modes: " << twelve.rel);
  CHECK(twelve.rel < 0.2 * six.rel);
}

TEST_CASE("resonant system with the true couplings leaves g unchanged") {
  const Grid g(64, 40.0);
  const ResonantSystem rs(g, 4, Gate::SqrtCharacterization);
  CHECK(rs.interaction_count() > 0);
  auto c = small_config();
  c.P = 4;
  c.init_modes = {0, 1, 3};
  auto s = init_profile(c);
  s.time = 1.0;
  const auto s0 = s;
  for (int i = 0; i < 20; ++i) rs.step(s, 0.1);
  CHECK(dist(s, s0) == 0.0);
}

TEST_CASE("single-term resonant right-hand side by hand") {
  const Grid g(64, 40.0);
  const ResonantTriple tr{0, 0, 3, -1, -1, 0.5, 0.37};
  std::vector<std::vector<ResonantTriple>> lists(4);
  lists[3].push_back(tr);
  const ResonantSystem rs(g, 4, lists);
  auto c = small_config();
  c.P = 4;
  c.init_modes = {0};
  c.eps = 1.0;
  const auto st = init_profile(c);
  const double s = 30.0;
  SpectralState out;
  rs.rhs(st, s, out);

  // band-limited values by direct sums
  auto value = [&](int comp, double xi) {
    cplx acc{};
    for (int j = 0; j < g.n(); ++j) {
      cplx fj{};
      for (int k = 0; k < g.n(); ++k) fj += st(comp, 0, k) * std::polar(1.0, g.x(j) * g.xi(k));
      acc += g.dx() * fj / g.length() * std::polar(1.0, -g.x(j) * xi);
    }
    return acc;
  };
  double worst = 0.0, peak = 0.0;
  for (int sigma : {1, -1})
    for (int k = 8; k < 56; k += 3) {
      if (!g.retained(k)) continue;
      const double xi = g.xi(k), e = 0.5 * xi;
      // alpha = beta = -1: both inputs come from component sigma
      const cplx gm = value(component(sigma), e);
      const double w = std::sqrt(e * e + 2.0);
      const double d2 = -2.0 / (0.5 * w * w * w);
      const cplx expect = -(1.0 / (8.0 * pi)) * tr.coupling * std::sqrt(2.0 * pi / (s * std::abs(d2))) *
                          std::polar(1.0, -sigma * 0.25 * pi * (d2 > 0 ? 1.0 : -1.0)) * gm * gm / (w * w);
      const cplx got = out(component(sigma), 3, k);
      worst = std::max(worst, std::abs(got - expect));
      peak = std::max(peak, std::abs(expect));
    }
  CHECK(peak > 0.0);
  CHECK(worst <= 1e-10 * peak);
  for (int p = 0; p < 3; ++p) CHECK(mode_l2(out, 0, p) == 0.0);
}

TEST_CASE("run_compare edge cases") {
  SimConfig c = small_config();
  c.P = 4;
  c.init_modes = {0, 1};
  c.t_end = 1.0;
  c.s0 = 1.0;
  auto r = run_compare(c);
  CHECK(r.completed);
  CHECK(r.diff_norms.back() == 0.0);

  c.t_end = 2.0;
  c.nonlinear = false;
  r = run_compare(c);
  for (double d : r.diff_norms) CHECK(d == 0.0);
  for (double v : r.variation) CHECK(v == 0.0);
}

TEST_CASE("checkpoint and resume reproduce the trajectory") {
  const auto dir = std::filesystem::temp_directory_path() / "reslab_test_ckpt";
  std::filesystem::remove_all(dir);
  SimConfig c = small_config();
  c.P = 4;
  c.init_modes = {0, 1};
  c.eps = 0.3;
  c.t_end = 3.0;
  c.output_every = 20;
  c.checkpoint_every = 50;
  const auto ref = run_compare(c);

  CompareOptions stop;
  stop.checkpoint_dir = dir.string();
  stop.stop_after_step = 130;
  const auto partial = run_compare(c, stop);
  CHECK_FALSE(partial.completed);

  CompareOptions resume;
  resume.checkpoint_dir = dir.string();
  resume.resume = true;
  const auto res = run_compare(c, resume);
  REQUIRE(res.completed);
  REQUIRE(res.times.size() == ref.times.size());
  for (std::size_t i = 0; i < ref.times.size(); ++i) {
    CHECK(res.times[i] == doctest::Approx(ref.times[i]).epsilon(1e-12));
    CHECK(std::abs(res.diff_norms[i] - ref.diff_norms[i]) <= 1e-12 * std::max(1.0, ref.diff_norms[i]));
    CHECK(std::abs(res.variation[i] - ref.variation[i]) <= 1e-12 * std::max(1.0, ref.variation[i]));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("blow-up is reported") {
  auto c = small_config();
  c.eps = 1.0;
  const Grid g(c.n_x1, c.length_x1);
  FullSolver fs(g, c.P, {true, 1e-3});
  auto s = init_profile(c);
  CHECK_THROWS_AS(fs.step(s, 0.01), BlowupDetected);
  c.blowup_ceiling = 1e-3;
  c.t_end = 2.0;
  CHECK_THROWS_AS(run_compare(c), BlowupDetected);
}

// Literal short-window property: |f - g| <= 0.1 * variation of f for
// t <= min(t_end, 0.1 eps^{-4/3}) at eps = 0.05. It does not hold: every
// resonant triple has zero coupling, so g stays at f(s0), and early on f
// drifts in one direction, which puts the ratio near 1 (0.12 even at t = 5.4).
TEST_CASE("short-window agreement at eps = 0.05" * doctest::should_fail()) {
  SimConfig c;
  c.eps = 0.05;
  c.t_end = std::min(20.0, 0.1 * std::pow(0.05, -4.0 / 3.0));
  c.output_every = 20;
  const auto r = run_compare(c);
  for (std::size_t i = 1; i < r.times.size(); ++i) CHECK(r.diff_norms[i] <= 0.1 * r.variation[i]);
}

TEST_CASE("agreement over the full window 1/eps") {
  for (double eps : {0.1, 0.05}) {
    SimConfig c;
    c.eps = eps;
    c.t_end = 1.0 / eps;
    c.output_every = 100;
    const auto r = run_compare(c);
    CHECK(r.diff_norms.back() > 0.0);
    CHECK(r.diff_norms.back() <= 0.1 * r.variation.back());
  }
}
