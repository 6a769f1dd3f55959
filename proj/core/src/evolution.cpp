#include "reslab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

#include <json.hpp>

#include "reslab/errors.hpp"
#include "reslab/parallel.hpp"

namespace reslab {

namespace {

constexpr double kPi = std::numbers::pi;

double omega(double xi, int p) { return std::sqrt(xi * xi + 2.0 * p + 2.0); }

void check_finite(const SpectralState& s, double ceiling, const char* who) {
  double peak = 0.0;
  for (const auto& z : s.data()) {
    const double a = std::abs(z);
    if (!std::isfinite(a)) throw BlowupDetected(std::string(who) + ": non-finite coefficient at t = " + std::to_string(s.time));
    peak = std::max(peak, a);
  }
  if (peak > ceiling) {
    throw BlowupDetected(std::string(who) + ": coefficient magnitude " + std::to_string(peak) + " exceeds ceiling " +
                         std::to_string(ceiling) + " at t = " + std::to_string(s.time));
  }
}

void truncate(SpectralState& s, const Grid& grid) {
  for (int c = 0; c < 2; ++c)
    for (int p = 0; p < s.modes(); ++p)
      for (int k = 0; k < grid.n(); ++k)
        if (!grid.retained(k)) s(c, p, k) = 0.0;
}

}  // namespace

void SimConfig::check() const {
  if (!(eps >= 0.0)) throw InvalidArgument("eps must be >= 0");
  if (P < 1) throw InvalidArgument("P must be >= 1");
  Grid(n_x1, length_x1);
  if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
  if (!(t_end >= dt)) throw InvalidArgument("t_end must be >= dt");
  if (!(s0 > 0.0)) throw InvalidArgument("s0 must be > 0");
  if (!(packet_width > 0.0)) throw InvalidArgument("packet_width must be > 0");
  if (output_every < 1) throw InvalidArgument("output_every must be >= 1");
  if (checkpoint_every < 0) throw InvalidArgument("checkpoint_every must be >= 0");
  for (int m : init_modes)
    if (m < 0 || m >= P) throw InvalidArgument("init_modes entries must lie in [0, P)");
}

SpectralState init_profile(const SimConfig& config) {
  config.check();
  const Grid grid(config.n_x1, config.length_x1);
  SpectralState s(config.P, config.n_x1);
  if (config.eps == 0.0) return s;

  std::mt19937_64 rng(config.seed);
  auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const double w = config.packet_width;
  for (int p : config.init_modes) {
    const double amp = 0.5 + 0.5 * u01();
    const double center = (2.0 * u01() - 1.0) * config.packet_center;
    const double shift = (2.0 * u01() - 1.0) * config.packet_shift;
    const double theta = 2.0 * kPi * u01();
    for (int k = 0; k < grid.n(); ++k) {
      const double xi = grid.xi(k);
      const double d = (xi - center) / w;
      s(0, p, k) += amp * std::exp(-0.5 * d * d) * std::polar(1.0, theta - shift * xi);
    }
  }
  truncate(s, grid);
  impose_reality(s, grid);
  const double norm = composite_norms(s, grid, config.M, config.N, 0.0).S_MN_t;
  const double scale = 0.5 * config.eps / norm;
  for (auto& z : s.data()) z *= scale;
  return s;
}

FullSolver::FullSolver(const Grid& grid, int P, FullSolverOptions options)
    : grid_(grid), P_(P), options_(options), table_(std::make_shared<TripleProductTable>(P - 1)) {
  if (P < 1) throw InvalidArgument("FullSolver: P must be >= 1");
}

FullSolver::Fields FullSolver::reconstruct(const SpectralState& state) const {
  const int n = grid_.n();
  const double t = state.time;
  Fields out;
  out.u.assign(static_cast<std::size_t>(P_) * n, 0.0);
  out.ut.assign(static_cast<std::size_t>(P_) * n, 0.0);
  parallel_for(P_, [&](std::ptrdiff_t pp) {
    const int p = static_cast<int>(pp);
    std::vector<cplx> uh(static_cast<std::size_t>(n)), uth(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const double w = omega(grid_.xi(k), p);
      const cplx up = std::polar(1.0, w * t) * state(0, p, k);
      const cplx um = std::polar(1.0, -w * t) * state(1, p, k);
      uh[static_cast<std::size_t>(k)] = (up - um) / cplx(0.0, 2.0 * w);
      uth[static_cast<std::size_t>(k)] = 0.5 * (up + um);
    }
    const auto a = fourier_inverse(grid_, uh);
    const auto b = fourier_inverse(grid_, uth);
    for (int j = 0; j < n; ++j) {
      out.u[static_cast<std::size_t>(p) * n + j] = a[static_cast<std::size_t>(j)].real();
      out.ut[static_cast<std::size_t>(p) * n + j] = b[static_cast<std::size_t>(j)].real();
    }
  });
  return out;
}

SpectralState FullSolver::from_fields(const Fields& fields, double t) const {
  const int n = grid_.n();
  SpectralState s(P_, n);
  s.time = t;
  for (int p = 0; p < P_; ++p) {
    std::vector<cplx> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      a[static_cast<std::size_t>(j)] = fields.u[static_cast<std::size_t>(p) * n + j];
      b[static_cast<std::size_t>(j)] = fields.ut[static_cast<std::size_t>(p) * n + j];
    }
    const auto uh = fourier_forward(grid_, a);
    const auto uth = fourier_forward(grid_, b);
    for (int k = 1; k < n; ++k) {
      const double w = omega(grid_.xi(k), p);
      const cplx i_w(0.0, w);
      s(0, p, k) = std::polar(1.0, -w * t) * (uth[static_cast<std::size_t>(k)] + i_w * uh[static_cast<std::size_t>(k)]);
      s(1, p, k) = std::polar(1.0, w * t) * (uth[static_cast<std::size_t>(k)] - i_w * uh[static_cast<std::size_t>(k)]);
    }
  }
  return s;
}

ModeField FullSolver::nonlinearity(const SpectralState& state, double t) const {
  const int n = grid_.n();
  SpectralState at = state;
  at.time = t;
  const Fields f = reconstruct(at);
  const auto& T = *table_;
  ModeField out(P_, n);
  parallel_for(P_, [&](std::ptrdiff_t pp) {
    const int p = static_cast<int>(pp);
    std::vector<cplx> prod(static_cast<std::size_t>(n));
    for (int m = 0; m < P_; ++m) {
      const double* um = f.u.data() + static_cast<std::size_t>(m) * n;
      for (int q = m; q < P_; ++q) {
        const double c = T(m, q, p) * (q == m ? 1.0 : 2.0);
        if (c == 0.0) continue;
        const double* uq = f.u.data() + static_cast<std::size_t>(q) * n;
        for (int j = 0; j < n; ++j) prod[static_cast<std::size_t>(j)] += c * um[j] * uq[j];
      }
    }
    fourier_forward(grid_, prod.data(), out.mode(p));
    for (int k = 0; k < n; ++k)
      if (!grid_.retained(k)) out(p, k) = 0.0;
  });
  return out;
}

void FullSolver::kick(SpectralState& state, double t, double h) const {
  if (!options_.nonlinear) return;
  const ModeField nl = nonlinearity(state, t);
  for (int p = 0; p < P_; ++p) {
    for (int k = 0; k < grid_.n(); ++k) {
      const double w = omega(grid_.xi(k), p);
      state(0, p, k) += h * std::polar(1.0, -w * t) * nl(p, k);
      state(1, p, k) += h * std::polar(1.0, w * t) * nl(p, k);
    }
  }
}

void FullSolver::step(SpectralState& state, double dt) const {
  if (state.modes() != P_ || state.samples() != grid_.n()) throw InvalidArgument("FullSolver::step: state shape mismatch");
  const double t0 = state.time;
  kick(state, t0, 0.5 * dt);
  kick(state, t0 + dt, 0.5 * dt);
  state.time = t0 + dt;
  check_finite(state, options_.blowup_ceiling, "step_full");
}

SpectralState step_full(const SpectralState& state, double dt, const FullSolver& solver) {
  SpectralState out = state;
  solver.step(out, dt);
  return out;
}

ResonantSystem::ResonantSystem(const Grid& grid, int P, Gate gate, ResonantOptions options)
    : grid_(grid), P_(P), options_(options) {
  if (P < 1) throw InvalidArgument("ResonantSystem: P must be >= 1");
  lists_.resize(static_cast<std::size_t>(P));
  for (int p = 0; p < P; ++p) lists_[static_cast<std::size_t>(p)] = interactions_for_output(p, P - 1, gate);
  build_samplers();
}

ResonantSystem::ResonantSystem(const Grid& grid, int P, std::vector<std::vector<ResonantTriple>> interactions,
                               ResonantOptions options)
    : grid_(grid), P_(P), options_(options), lists_(std::move(interactions)) {
  if (static_cast<int>(lists_.size()) != P) throw InvalidArgument("ResonantSystem: need one interaction list per mode");
  for (const auto& list : lists_)
    for (const auto& tr : list)
      if (tr.m < 0 || tr.n < 0 || tr.m >= P || tr.n >= P) throw InvalidArgument("ResonantSystem: input mode out of range");
  build_samplers();
}

std::size_t ResonantSystem::interaction_count() const {
  std::size_t c = 0;
  for (const auto& l : lists_) c += l.size();
  return c;
}

void ResonantSystem::build_samplers() {
  const int n = grid_.n();
  const double edge = -grid_.xi_min();
  auto add = [&](double scale) {
    for (const auto& s : samplers_)
      if (s.scale == scale) return;
    Sampler s;
    s.scale = scale;
    s.matrix.assign(static_cast<std::size_t>(n) * n, cplx{});
    for (int k = 0; k < n; ++k) {
      const double xi = scale * grid_.xi(k);
      if (std::abs(xi) > edge * (1.0 + 1e-12)) continue;
      for (int j = 0; j < n; ++j) s.matrix[static_cast<std::size_t>(k) * n + j] = std::polar(1.0, -grid_.x(j) * xi);
    }
    samplers_.push_back(std::move(s));
  };
  for (const auto& list : lists_)
    for (const auto& tr : list) {
      add(tr.lambda);
      add(1.0 - tr.lambda);
    }
}

const ResonantSystem::Sampler& ResonantSystem::sampler(double scale) const {
  for (const auto& s : samplers_)
    if (s.scale == scale) return s;
  throw InvalidArgument("ResonantSystem: no sampler for scale " + std::to_string(scale));
}

std::vector<cplx> ResonantSystem::physical_samples(const SpectralState& g) const {
  const int n = grid_.n();
  std::vector<cplx> out(2 * static_cast<std::size_t>(P_) * n);
  parallel_for(2 * P_, [&](std::ptrdiff_t idx) {
    const int c = static_cast<int>(idx) / P_;
    const int p = static_cast<int>(idx) % P_;
    cplx* dst = out.data() + idx * n;
    fourier_inverse(grid_, g.mode(c, p), dst);
    for (int j = 0; j < n; ++j) dst[j] *= grid_.dx();
  });
  return out;
}

void ResonantSystem::add_term(const std::vector<cplx>& phys, const ResonantTriple& tr, int sigma, double s,
                              double weight, cplx* out) const {
  const int n = grid_.n();
  const int cm = component(-sigma * tr.alpha);
  const int cn = component(-sigma * tr.beta);
  const cplx* gm = phys.data() + (static_cast<std::size_t>(cm) * P_ + tr.m) * n;
  const cplx* gn = phys.data() + (static_cast<std::size_t>(cn) * P_ + tr.n) * n;
  const Sampler& A = sampler(tr.lambda);
  const Sampler& B = sampler(1.0 - tr.lambda);
  const PhaseParams q = tr.params();
  for (int k = 0; k < n; ++k) {
    if (!grid_.retained(k)) continue;
    const cplx* ra = A.matrix.data() + static_cast<std::size_t>(k) * n;
    const cplx* rb = B.matrix.data() + static_cast<std::size_t>(k) * n;
    cplx vm{}, vn{};
    for (int j = 0; j < n; ++j) {
      vm += ra[j] * gm[j];
      vn += rb[j] * gn[j];
    }
    if (vm == cplx{} || vn == cplx{}) continue;
    const double xi = grid_.xi(k);
    const double d2 = d2_at_stationary(q, xi);
    const double mag = std::sqrt(2.0 * kPi / (s * std::abs(d2)));
    const cplx rot = std::polar(1.0, -sigma * 0.25 * kPi * (d2 > 0.0 ? 1.0 : -1.0));
    out[k] += weight * mag * rot * vm * vn /
              (mode_bracket(tr.lambda * xi, tr.m) * mode_bracket((1.0 - tr.lambda) * xi, tr.n));
  }
}

std::vector<cplx> ResonantSystem::kernel_term(const SpectralState& g, const ResonantTriple& tr, int sigma,
                                              double s) const {
  if (!(s > 0.0)) throw InvalidArgument("ResonantSystem: s must be > 0");
  const auto phys = physical_samples(g);
  std::vector<cplx> out(static_cast<std::size_t>(grid_.n()));
  const double ab = options_.alpha_beta ? tr.alpha * tr.beta : 1.0;
  add_term(phys, tr, sigma, s, -ab / (8.0 * kPi), out.data());
  return out;
}

void ResonantSystem::rhs(const SpectralState& g, double s, SpectralState& out) const {
  if (!(s > 0.0)) throw InvalidArgument("ResonantSystem: s must be > 0");
  out = SpectralState(P_, grid_.n());
  out.time = s;
  if (interaction_count() == 0) return;
  const auto phys = physical_samples(g);
  parallel_for(2 * P_, [&](std::ptrdiff_t idx) {
    const int c = static_cast<int>(idx) / P_;
    const int p = static_cast<int>(idx) % P_;
    const int sigma = c == 0 ? 1 : -1;
    for (const auto& tr : lists_[static_cast<std::size_t>(p)]) {
      if (tr.coupling == 0.0) continue;
      const double ab = options_.alpha_beta ? tr.alpha * tr.beta : 1.0;
      add_term(phys, tr, sigma, s, -ab * tr.coupling / (8.0 * kPi), out.mode(c, p));
    }
  });
}

void ResonantSystem::step(SpectralState& g, double ds) const {
  const double s = g.time;
  if (!(s > 0.0)) throw InvalidArgument("step_resonant: s must be > 0");
  SpectralState k1, k2;
  rhs(g, s, k1);
  SpectralState mid = g;
  for (std::size_t i = 0; i < mid.data().size(); ++i) mid.data()[i] += ds * k1.data()[i];
  rhs(mid, s + ds, k2);
  for (std::size_t i = 0; i < g.data().size(); ++i) g.data()[i] += 0.5 * ds * (k1.data()[i] + k2.data()[i]);
  g.time = s + ds;
  check_finite(g, options_.blowup_ceiling, "step_resonant");
}

SpectralState step_resonant(const SpectralState& state, double s, double ds, const ResonantSystem& system) {
  SpectralState out = state;
  out.time = s;
  system.step(out, ds);
  return out;
}

namespace {

using nlohmann::json;

json norms_json(const CompositeNorms& n) { return json::array({n.tilde_HN, n.HM_HN, n.B_t, n.calB_t, n.S_MN_t}); }

CompositeNorms norms_from(const json& j) {
  CompositeNorms n;
  n.tilde_HN = j.at(0).get<double>();
  n.HM_HN = j.at(1).get<double>();
  n.B_t = j.at(2).get<double>();
  n.calB_t = j.at(3).get<double>();
  n.S_MN_t = j.at(4).get<double>();
  return n;
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) throw IoError("cannot write " + tmp);
    os << text;
    if (!os) throw IoError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

void write_snapshot_atomic(const std::filesystem::path& path, const SpectralState& s, const Grid& grid) {
  const auto tmp = path.string() + ".tmp";
  write_snapshot(tmp, s, grid);
  std::filesystem::rename(tmp, path);
}

struct CompareState {
  long step = 0;
  double variation = 0.0;  // running, updated every step
  SpectralState f, g;
  TrajectoryRecord record;
};

void save_checkpoint(const std::filesystem::path& dir, const CompareState& st, const Grid& grid) {
  std::filesystem::create_directories(dir);
  write_snapshot_atomic(dir / "f.state", st.f, grid);
  write_snapshot_atomic(dir / "g.state", st.g, grid);
  json j;
  j["step"] = st.step;
  j["running_variation"] = st.variation;
  j["times"] = st.record.times;
  j["diff"] = st.record.diff_norms;
  j["variation"] = st.record.variation;
  j["norms_f"] = json::array();
  j["norms_g"] = json::array();
  for (const auto& n : st.record.norms_f) j["norms_f"].push_back(norms_json(n));
  for (const auto& n : st.record.norms_g) j["norms_g"].push_back(norms_json(n));
  write_atomic(dir / "progress.json", j.dump());
}

bool load_checkpoint(const std::filesystem::path& dir, CompareState& st) {
  const auto prog = dir / "progress.json";
  if (!std::filesystem::exists(prog)) return false;
  std::ifstream is(prog);
  const json j = json::parse(is);
  st.step = j.at("step").get<long>();
  st.variation = j.at("running_variation").get<double>();
  st.record.times = j.at("times").get<std::vector<double>>();
  st.record.diff_norms = j.at("diff").get<std::vector<double>>();
  st.record.variation = j.at("variation").get<std::vector<double>>();
  st.record.norms_f.clear();
  st.record.norms_g.clear();
  for (const auto& n : j.at("norms_f")) st.record.norms_f.push_back(norms_from(n));
  for (const auto& n : j.at("norms_g")) st.record.norms_g.push_back(norms_from(n));
  st.f = read_snapshot((dir / "f.state").string()).state;
  st.g = read_snapshot((dir / "g.state").string()).state;
  return true;
}

}  // namespace

TrajectoryRecord run_compare(const SimConfig& config, const CompareOptions& options) {
  config.check();
  if (config.t_end < config.s0) throw InvalidArgument("run_compare: t_end must be >= s0");
  const Grid grid(config.n_x1, config.length_x1);
  const FullSolver full(grid, config.P, {config.nonlinear, config.blowup_ceiling});
  const ResonantSystem res(grid, config.P, config.gate, {config.resonant_alpha_beta, config.blowup_ceiling});

  const long n_main = std::max(0L, static_cast<long>(std::ceil((config.t_end - config.s0) / config.dt - 1e-9)));
  const double h = n_main > 0 ? (config.t_end - config.s0) / n_main : 0.0;
  const std::filesystem::path dir = options.checkpoint_dir;

  auto record = [&](CompareState& st, double variation) {
    st.record.times.push_back(st.f.time);
    st.record.norms_f.push_back(composite_norms(st.f, grid, config.M, config.N, st.f.time));
    st.record.norms_g.push_back(composite_norms(st.g, grid, config.M, config.N, st.g.time));
    st.record.diff_norms.push_back(hm_l2_distance(st.f, st.g, grid, config.M0));
    st.record.variation.push_back(variation);
  };

  CompareState st;
  const bool resumed = options.resume && !dir.empty() && load_checkpoint(dir, st);
  if (!resumed) {
    st.f = init_profile(config);
    const long n_pre = std::max(1L, static_cast<long>(std::ceil(config.s0 / config.dt - 1e-9)));
    const double h0 = config.s0 / n_pre;
    for (long i = 1; i <= n_pre; ++i) {
      full.step(st.f, h0);
      st.f.time = i == n_pre ? config.s0 : i * h0;
    }
    st.g = st.f;
    st.step = 0;
    record(st, 0.0);
  }

  auto checkpoint = [&] {
    if (!dir.empty()) save_checkpoint(dir, st, grid);
  };

  while (st.step < n_main) {
    const SpectralState prev = st.f;
    ++st.step;
    const double t = config.s0 + st.step * h;
    full.step(st.f, h);
    res.step(st.g, h);
    st.f.time = t;
    st.g.time = t;
    st.variation += hm_l2_distance(prev, st.f, grid, config.M0);
    if (st.step % config.output_every == 0 || st.step == n_main) record(st, st.variation);
    if (config.checkpoint_every > 0 && st.step % config.checkpoint_every == 0) checkpoint();
    if (options.stop_after_step >= 0 && st.step >= options.stop_after_step && st.step < n_main) {
      checkpoint();
      st.record.completed = false;
      return st.record;
    }
  }
  st.record.completed = true;
  return st.record;
}

}  // namespace reslab
