#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "reslab/hermite_basis.hpp"

namespace reslab {

using cplx = std::complex<double>;

/// Periodic x1 box [-L/2, L/2) with n points, and the centered frequency grid
/// xi_k = (k - n/2) * 2 pi / L, k in [0, n).
class Grid {
 public:
  Grid(int n_x1, double length_x1);

  int n() const { return n_; }
  double length() const { return length_; }
  double dx() const { return length_ / n_; }
  double dxi() const { return 2.0 * kPi / length_; }
  double x(int j) const { return -0.5 * length_ + j * dx(); }
  double xi(int k) const { return (k - n_ / 2) * dxi(); }
  /// Index of -xi_k, or -1 for the unpaired Nyquist bin k = 0.
  int mirror(int k) const { return k == 0 ? -1 : n_ - k; }
  /// Band-limited interpolation is defined on [xi_min, -xi_min).
  double xi_min() const { return xi(0); }
  /// True when bin k survives the 2/3-rule truncation.
  bool retained(int k) const;

  static constexpr double kPi = 3.14159265358979323846;

 private:
  int n_;
  double length_;
};

/// F(xi_k) ~ sum_j dx f(x_j) e^{-i x_j xi_k}; inverse carries 1/(2 pi).
void fourier_forward(const Grid& grid, const cplx* in, cplx* out);
void fourier_inverse(const Grid& grid, const cplx* in, cplx* out);
std::vector<cplx> fourier_forward(const Grid& grid, const std::vector<cplx>& in);
std::vector<cplx> fourier_inverse(const Grid& grid, const std::vector<cplx>& in);

/// Field sampled on (x1_j, x2_i) with x2 on the Hermite nodes; data[j * n_x2 + i].
struct PhysicalField {
  int n_x1 = 0;
  int n_x2 = 0;
  std::vector<cplx> data;

  PhysicalField() = default;
  PhysicalField(int nx1, int nx2) : n_x1(nx1), n_x2(nx2), data(static_cast<std::size_t>(nx1) * nx2) {}
  cplx& operator()(int j, int i) { return data[static_cast<std::size_t>(j) * n_x2 + i]; }
  const cplx& operator()(int j, int i) const { return data[static_cast<std::size_t>(j) * n_x2 + i]; }
};

/// Coefficients f_p(xi_k); data[p * n + k].
struct ModeField {
  int P = 0;
  int n = 0;
  std::vector<cplx> data;

  ModeField() = default;
  ModeField(int modes, int samples) : P(modes), n(samples), data(static_cast<std::size_t>(modes) * samples) {}
  cplx& operator()(int p, int k) { return data[static_cast<std::size_t>(p) * n + k]; }
  const cplx& operator()(int p, int k) const { return data[static_cast<std::size_t>(p) * n + k]; }
  cplx* mode(int p) { return data.data() + static_cast<std::size_t>(p) * n; }
  const cplx* mode(int p) const { return data.data() + static_cast<std::size_t>(p) * n; }
};

/// Profile coefficients f_{sigma,p}(xi_k) for sigma in {+,-}; component 0 is +.
class SpectralState {
 public:
  SpectralState() = default;
  SpectralState(int P, int n) : P_(P), n_(n), data_(2 * static_cast<std::size_t>(P) * n) {}

  int modes() const { return P_; }
  int samples() const { return n_; }

  cplx& operator()(int c, int p, int k) { return data_[offset(c, p) + k]; }
  const cplx& operator()(int c, int p, int k) const { return data_[offset(c, p) + k]; }
  cplx* mode(int c, int p) { return data_.data() + offset(c, p); }
  const cplx* mode(int c, int p) const { return data_.data() + offset(c, p); }

  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

  double time = 0.0;

 private:
  std::size_t offset(int c, int p) const { return (static_cast<std::size_t>(c) * P_ + p) * n_; }

  int P_ = 0;
  int n_ = 0;
  std::vector<cplx> data_;
};

/// Component index for sigma = +1 / -1.
inline int component(int sigma) { return sigma > 0 ? 0 : 1; }

struct TransformReport {
  /// Largest |f| on the outermost x2 nodes relative to max |f|.
  double boundary_ratio = 0.0;
  bool confined = true;
};

class FourierHermiteTransform {
 public:
  FourierHermiteTransform(Grid grid, std::shared_ptr<const HermiteBasis> basis);

  const Grid& grid() const { return grid_; }
  const HermiteBasis& basis() const { return *basis_; }
  int modes() const { return basis_->mode_count(); }

  /// DFT in x1, Gauss-Hermite projection in x2. Sets report->confined = false
  /// when the field has not decayed below 1e-12 at the outer x2 nodes.
  ModeField forward(const PhysicalField& f, TransformReport* report = nullptr) const;
  PhysicalField inverse(const ModeField& c) const;

  /// sqrt(dx * sum_j sum_i W_i |f|^2).
  double l2_physical(const PhysicalField& f) const;
  /// sqrt((2 pi)^{-1} sum_p sum_k dxi |f_p|^2).
  double l2_modes(const ModeField& c) const;

 private:
  Grid grid_;
  std::shared_ptr<const HermiteBasis> basis_;
};

/// Trigonometric interpolation of one mode's coefficients:
/// f(xi) = sum_j dx f(x_j) e^{-i x_j xi}, exact on the grid.
class BandLimitedInterpolant {
 public:
  BandLimitedInterpolant(const Grid& grid, const cplx* coeffs);
  /// Throws InterpolationRangeError outside [xi_min, -xi_min].
  cplx operator()(double xi) const;
  bool in_range(double xi) const;

 private:
  Grid grid_;
  std::vector<cplx> samples_;  // dx * f(x_j)
};

cplx interpolate(const Grid& grid, const cplx* coeffs, double xi);

enum class WeightPath { Spectral, Physical };

/// ||<xi>^N f||_{L2(xi)} with kappa powers of the <x1> weight realized as
/// xi-derivatives: kappa = 1 adds ||<xi>^N d/dxi f||, kappa = 2 uses
/// (1 - d^2/dxi^2) f. The physical path (kappa <= 1) multiplies by x_j instead.
double sobolev_weighted_norm(const Grid& grid, const cplx* f, double N, int kappa,
                             WeightPath path = WeightPath::Spectral);
double sobolev_weighted_norm(const Grid& grid, const std::vector<cplx>& f, double N, int kappa,
                             WeightPath path = WeightPath::Spectral);

/// ||(xi^2 + 2p + 2)^N f||_{L2(xi)}.
double tilde_hn_mode(const Grid& grid, const cplx* f, int p, double N);

/// f / sqrt(xi^2 + lambda).
std::vector<cplx> apply_resolvent(const Grid& grid, const cplx* f, double lambda);

struct CompositeNorms {
  double tilde_HN = 0.0;
  double HM_HN = 0.0;
  double B_t = 0.0;
  double calB_t = 0.0;
  double S_MN_t = 0.0;
};

/// Norms of a profile state, each summed over the two components.
CompositeNorms composite_norms(const SpectralState& state, const Grid& grid, double M, double N, double t);

/// Single-component (c) versions of the mode-summed norms.
double tilde_hn_norm(const SpectralState& state, const Grid& grid, int c, double N);
double hm_hn_norm(const SpectralState& state, const Grid& grid, int c, double M, double N);

/// sum_c ( sum_p (2p+2)^{2 M0} ||f_{c,p}||^2 )^{1/2}; the H^{M0}L^2 distance of a and b.
double hm_l2_distance(const SpectralState& a, const SpectralState& b, const Grid& grid, double M0);

/// f_-(xi) = conj(f_+(-xi)); the Nyquist bin is cleared.
void impose_reality(SpectralState& state, const Grid& grid);
/// max |f_-(xi) - conj(f_+(-xi))| over paired bins.
double reality_defect(const SpectralState& state, const Grid& grid);

/// FHSTATE1 snapshot: magic, uint32 P, uint32 n_x1, f64 length_x1, f64 time,
/// then (re, im) f64 pairs in (sigma, p, k) order; little-endian.
void write_snapshot(const std::string& path, const SpectralState& state, const Grid& grid);
struct Snapshot {
  SpectralState state;
  int n_x1 = 0;
  double length_x1 = 0.0;
};
Snapshot read_snapshot(const std::string& path);

}  // namespace reslab
