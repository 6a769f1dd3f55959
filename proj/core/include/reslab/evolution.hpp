#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "reslab/hermite_basis.hpp"
#include "reslab/phase_analysis.hpp"
#include "reslab/resonance_enum.hpp"
#include "reslab/spectral_transform.hpp"

namespace reslab {

struct SimConfig {
  double eps = 0.05;
  int P = 8;
  int n_x1 = 128;
  double length_x1 = 80.0;
  double dt = 0.01;
  double t_end = 20.0;
  double M0 = 0.0;
  double M = 4.0;
  double N = 2.0;
  double s0 = 1.0;
  Gate gate = Gate::SqrtCharacterization;
  std::uint64_t seed = 1;

  // Initial data: one Gaussian packet per listed mode.
  std::vector<int> init_modes{0, 1};
  double packet_width = 0.4;    // standard deviation in xi
  double packet_center = 0.5;   // centers drawn from [-c, c]
  double packet_shift = 1.0;    // x1 offsets drawn from [-s, s]

  bool nonlinear = true;
  bool resonant_alpha_beta = true;
  bool massless = false;
  double blowup_ceiling = 1e6;
  int output_every = 10;
  int checkpoint_every = 0;  // steps; 0 disables

  /// Throws InvalidArgument on violated invariants.
  void check() const;
};

/// Seeded Gaussian packets on the configured modes, mirrored to satisfy the
/// reality constraint, truncated to the 2/3 band and scaled so S^{M,N}_0 = eps/2.
SpectralState init_profile(const SimConfig& config);

struct FullSolverOptions {
  bool nonlinear = true;
  double blowup_ceiling = 1e6;
};

/// Strang splitting of the profile equation d/dt f_sigma = e^{-i sigma t <xi>_p} (u^2)^_p:
/// half kick, exact linear rotation (the identity on profiles), half kick.
class FullSolver {
 public:
  FullSolver(const Grid& grid, int P, FullSolverOptions options = {});

  const Grid& grid() const { return grid_; }
  int modes() const { return P_; }

  /// Advances state by dt and updates state.time.
  void step(SpectralState& state, double dt) const;

  /// (u^2)^_p(xi_k) with u reconstructed from the profile at time t, 2/3-truncated.
  ModeField nonlinearity(const SpectralState& state, double t) const;

  /// Real u_p(x_j) and d/dt u_p(x_j), row-major (p, j).
  struct Fields {
    std::vector<double> u;
    std::vector<double> ut;
  };
  Fields reconstruct(const SpectralState& state) const;

  /// Profile at time t from mode fields u_p, d/dt u_p on the x1 grid.
  SpectralState from_fields(const Fields& fields, double t) const;

 private:
  void kick(SpectralState& state, double t, double h) const;

  Grid grid_;
  int P_;
  FullSolverOptions options_;
  std::shared_ptr<const TripleProductTable> table_;
};

SpectralState step_full(const SpectralState& state, double dt, const FullSolver& solver);

struct ResonantOptions {
  bool alpha_beta = true;
  double blowup_ceiling = 1e6;
};

/// d/ds g_{sigma,p}(xi) = -(1/8 pi) sum ab M sqrt(2 pi / (s |d2|)) e^{-i sigma pi/4 sgn d2}
///   g_{-sigma a, m}(lambda xi) g_{-sigma b, n}((1-lambda) xi) / (<lambda xi>_m <(1-lambda) xi>_n),
/// summed over the resonant interactions of each output mode; d2 is
/// d2phi/deta2 at the stationary point. Samples outside the frequency window
/// contribute zero.
class ResonantSystem {
 public:
  ResonantSystem(const Grid& grid, int P, Gate gate, ResonantOptions options = {});
  /// Explicit interaction lists, one per output mode (coupling taken from each entry).
  ResonantSystem(const Grid& grid, int P, std::vector<std::vector<ResonantTriple>> interactions,
                 ResonantOptions options = {});

  const std::vector<ResonantTriple>& interactions(int p) const { return lists_[static_cast<std::size_t>(p)]; }
  std::size_t interaction_count() const;

  void rhs(const SpectralState& g, double s, SpectralState& out) const;

  /// One term of the sum for output component sigma, without the coupling M.
  std::vector<cplx> kernel_term(const SpectralState& g, const ResonantTriple& tr, int sigma, double s) const;

  /// Heun step; advances g.time.
  void step(SpectralState& g, double ds) const;

 private:
  struct Sampler {
    double scale;
    std::vector<cplx> matrix;  // n x n: e^{-i x_j scale xi_k}, zero rows outside the window
  };
  const Sampler& sampler(double scale) const;
  std::vector<cplx> physical_samples(const SpectralState& g) const;
  void build_samplers();
  void add_term(const std::vector<cplx>& phys, const ResonantTriple& tr, int sigma, double s, double weight,
                cplx* out) const;

  Grid grid_;
  int P_;
  ResonantOptions options_;
  std::vector<std::vector<ResonantTriple>> lists_;
  std::vector<Sampler> samplers_;
};

SpectralState step_resonant(const SpectralState& state, double s, double ds, const ResonantSystem& system);

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<CompositeNorms> norms_f;
  std::vector<CompositeNorms> norms_g;
  std::vector<double> diff_norms;  // ||f - g|| in H^{M0}L^2
  std::vector<double> variation;   // cumulative total variation of f in the same norm
  bool completed = false;
};

struct CompareOptions {
  std::string checkpoint_dir;  // empty disables checkpoints
  bool resume = false;
  long stop_after_step = -1;  // for interruption tests; -1 runs to the end
};

/// Full evolution from 0 to s0, then f (full) and g (resonant, g(s0) = f(s0))
/// side by side to t_end; records at s0, every output_every steps and at t_end.
TrajectoryRecord run_compare(const SimConfig& config, const CompareOptions& options = {});

}  // namespace reslab
