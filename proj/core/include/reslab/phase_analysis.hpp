#pragma once

#include <optional>
#include <string>

namespace reslab {

/// Mode indices and signs of one three-wave interaction.
struct PhaseParams {
  int m = 0;
  int n = 0;
  int p = 0;
  int alpha = -1;
  int beta = -1;

  /// Throws InvalidArgument on negative indices or signs outside {-1, +1}.
  void validate() const;
};

/// <eta>_m = sqrt(eta^2 + 2m + 2).
double mode_bracket(double eta, int m);

/// phi = <xi>_p + alpha <eta>_m + beta <xi - eta>_n.
double phase(const PhaseParams& q, double xi, double eta);
double dphase_deta(const PhaseParams& q, double xi, double eta);
double dphase_dxi(const PhaseParams& q, double xi, double eta);
double d2phase_deta2(const PhaseParams& q, double xi, double eta);

/// lambda = 1 / (1 + alpha beta sqrt((n+1)/(m+1))); eta = lambda xi is the
/// stationary point of eta -> phi(xi, eta). Throws DegenerateSelfInteraction
/// for m == n with alpha beta == -1.
double lambda_coeff(int m, int n, int alpha, int beta);

/// Signed d2phi/deta2 at eta = lambda xi, in closed form:
/// beta (2m+2) / (lambda r <lambda xi>_m^3) with r = sqrt((n+1)/(m+1)).
double d2_at_stationary(const PhaseParams& q, double xi);

enum class Gate { AsPrinted, SqrtCharacterization };

enum class ResonanceTag { NoTimeResonance, SpaceTimeResonantLine, SpaceResonantOnly };

struct ResonanceClass {
  ResonanceTag tag = ResonanceTag::NoTimeResonance;
  /// Lambda with resonant line xi = Lambda eta; set for SpaceTimeResonantLine.
  std::optional<double> slope;
};

const char* to_string(ResonanceTag tag);
const char* to_string(Gate gate);
/// Accepts "printed"/"as-printed" and "sqrt".
Gate parse_gate(const std::string& s);

/// AsPrinted: the sign inequalities on alpha beta p + beta m, alpha beta p + beta n
/// and alpha beta p + beta m + alpha n, plus is_resonant(m, n, p).
/// SqrtCharacterization: the mass of the output wave of the collinear decay
/// equals the sum of the other two, e.g. sqrt(p+1) = sqrt(m+1) + sqrt(n+1)
/// for (-,-).
ResonanceClass classify(const PhaseParams& q, Gate gate = Gate::AsPrinted);

/// 1 / ((sqrt(n+1) + sqrt(m+1))^2 R). Throws ResonantCase when (m, n, p)
/// is resonant (see is_resonant).
double phase_floor(int m, int n, int p, double R);

/// Minimum of |phi| over a (2 samples + 1)^2 lattice restricted to the disk of radius R.
double sampled_phase_min(const PhaseParams& q, double R, int samples = 200);

enum class WidthRegime { LowFreq, RhoSmall, RhoLarge };

const char* to_string(WidthRegime r);

struct WidthProbe {
  double measured_width = 0.0;
  double reference_scale = 0.0;
  double base_eta = 0.0;
};

/// Width of {-2^{-j} <= d phi/d eta <= -2^{-(j+1)}} (alpha = beta = -1),
/// measured along the normal to the line xi = Lambda eta through
/// (Lambda eta_c, eta_c). eta_c defaults per regime: 0 for LowFreq,
/// sqrt(0.05 * 2^j * m) for RhoSmall, 50 for RhoLarge.
/// Throws BracketFailure when a level is not reached in the probed window.
WidthProbe band_width_probe_detail(int m, int n, int j, WidthRegime regime,
                                   std::optional<double> eta_center = std::nullopt);
double band_width_probe(int m, int n, int j, WidthRegime regime,
                        std::optional<double> eta_center = std::nullopt);

/// Reference scales: 2^{-j} min(sqrt m, sqrt n); 2^{3k} 2^{-j} / (2m+2) with
/// 2^k = |eta_c|; 2^{j/2} sqrt(2n+2).
double band_width_reference(int m, int n, int j, WidthRegime regime, double eta_center);

}  // namespace reslab
