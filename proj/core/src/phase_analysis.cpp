#include "reslab/phase_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "reslab/errors.hpp"
#include "reslab/resonance_enum.hpp"

namespace reslab {

void PhaseParams::validate() const {
  if (m < 0 || n < 0 || p < 0) throw InvalidArgument("PhaseParams: negative mode index");
  if ((alpha != 1 && alpha != -1) || (beta != 1 && beta != -1)) {
    throw InvalidArgument("PhaseParams: signs must be +1 or -1");
  }
}

double mode_bracket(double eta, int m) { return std::sqrt(eta * eta + 2.0 * m + 2.0); }

double phase(const PhaseParams& q, double xi, double eta) {
  return mode_bracket(xi, q.p) + q.alpha * mode_bracket(eta, q.m) + q.beta * mode_bracket(xi - eta, q.n);
}

double dphase_deta(const PhaseParams& q, double xi, double eta) {
  return q.alpha * eta / mode_bracket(eta, q.m) - q.beta * (xi - eta) / mode_bracket(xi - eta, q.n);
}

double dphase_dxi(const PhaseParams& q, double xi, double eta) {
  return xi / mode_bracket(xi, q.p) + q.beta * (xi - eta) / mode_bracket(xi - eta, q.n);
}

double d2phase_deta2(const PhaseParams& q, double xi, double eta) {
  const double a = mode_bracket(eta, q.m);
  const double b = mode_bracket(xi - eta, q.n);
  return q.alpha * (2.0 * q.m + 2.0) / (a * a * a) + q.beta * (2.0 * q.n + 2.0) / (b * b * b);
}

double lambda_coeff(int m, int n, int alpha, int beta) {
  PhaseParams{m, n, 0, alpha, beta}.validate();
  if (m == n && alpha * beta == -1) {
    throw DegenerateSelfInteraction("lambda_coeff: m == n with alpha beta = -1 (m=" + std::to_string(m) + ")");
  }
  const double r = std::sqrt((n + 1.0) / (m + 1.0));
  return 1.0 / (1.0 + alpha * beta * r);
}

double d2_at_stationary(const PhaseParams& q, double xi) {
  const double lambda = lambda_coeff(q.m, q.n, q.alpha, q.beta);
  const double r = std::sqrt((q.n + 1.0) / (q.m + 1.0));
  const double a = mode_bracket(lambda * xi, q.m);
  return q.beta * (2.0 * q.m + 2.0) / (lambda * r * a * a * a);
}

const char* to_string(ResonanceTag tag) {
  switch (tag) {
    case ResonanceTag::NoTimeResonance: return "NoTimeResonance";
    case ResonanceTag::SpaceTimeResonantLine: return "SpaceTimeResonantLine";
    case ResonanceTag::SpaceResonantOnly: return "SpaceResonantOnly";
  }
  return "?";
}

const char* to_string(Gate gate) { return gate == Gate::AsPrinted ? "printed" : "sqrt"; }

Gate parse_gate(const std::string& s) {
  if (s == "printed" || s == "as-printed" || s == "AsPrinted") return Gate::AsPrinted;
  if (s == "sqrt" || s == "SqrtCharacterization") return Gate::SqrtCharacterization;
  throw InvalidArgument("unknown gate '" + s + "' (expected sqrt or printed)");
}

namespace {

// sqrt(a) == sqrt(b) + sqrt(c) for positive integers.
bool root_sum(std::int64_t a, std::int64_t b, std::int64_t c) {
  const std::int64_t s = exact_isqrt(b * c);
  return s >= 0 && a == b + c + 2 * s;
}

ResonanceClass line(const PhaseParams& q) {
  ResonanceClass out{ResonanceTag::SpaceTimeResonantLine, std::nullopt};
  const double r = std::sqrt((q.n + 1.0) / (q.m + 1.0));
  out.slope = 1.0 + q.alpha * q.beta * r;
  return out;
}

}  // namespace

ResonanceClass classify(const PhaseParams& q, Gate gate) {
  q.validate();
  if (q.alpha == 1 && q.beta == 1) return {};
  const std::int64_t m = q.m, n = q.n, p = q.p, a = q.alpha, b = q.beta;

  if (gate == Gate::AsPrinted) {
    if (a * b * p + b * m < 0 || a * b * p + b * n < 0) return {};
    if (is_resonant(m, n, p) && a * b * p + b * m + a * n >= 0) return line(q);
    return {ResonanceTag::SpaceResonantOnly, std::nullopt};
  }

  bool no_time = false;
  bool resonant = false;
  if (a == -1 && b == -1) {
    no_time = p < m || p < n;
    resonant = root_sum(p + 1, m + 1, n + 1);
  } else if (a == -1) {
    no_time = m < n || m < p;
    resonant = root_sum(m + 1, p + 1, n + 1);
  } else {
    no_time = n < m || n < p;
    resonant = root_sum(n + 1, p + 1, m + 1);
  }
  if (no_time) return {};
  if (resonant) return line(q);
  return {ResonanceTag::SpaceResonantOnly, std::nullopt};
}

double phase_floor(int m, int n, int p, double R) {
  if (m < 0 || n < 0 || p < 0) throw InvalidArgument("phase_floor: negative mode index");
  if (!(R > 0.0)) throw InvalidArgument("phase_floor: R must be positive");
  if (is_resonant(m, n, p)) {
    throw ResonantCase("phase_floor: (" + std::to_string(m) + "," + std::to_string(n) + "," + std::to_string(p) +
                       ") is space-time resonant");
  }
  const double s = std::sqrt(n + 1.0) + std::sqrt(m + 1.0);
  return 1.0 / (s * s * R);
}

double sampled_phase_min(const PhaseParams& q, double R, int samples) {
  q.validate();
  double best = std::numeric_limits<double>::infinity();
  const double h = R / samples;
  for (int i = -samples; i <= samples; ++i) {
    for (int j = -samples; j <= samples; ++j) {
      const double xi = i * h;
      const double eta = j * h;
      if (xi * xi + eta * eta > R * R) continue;
      best = std::min(best, std::abs(phase(q, xi, eta)));
    }
  }
  return best;
}

const char* to_string(WidthRegime r) {
  switch (r) {
    case WidthRegime::LowFreq: return "LowFreq";
    case WidthRegime::RhoSmall: return "RhoSmall";
    case WidthRegime::RhoLarge: return "RhoLarge";
  }
  return "?";
}

double band_width_reference(int m, int n, int j, WidthRegime regime, double eta_center) {
  switch (regime) {
    case WidthRegime::LowFreq:
      return std::ldexp(1.0, -j) * std::min(std::sqrt(double(m)), std::sqrt(double(n)));
    case WidthRegime::RhoSmall: {
      const double e = std::abs(eta_center);
      return e * e * e * std::ldexp(1.0, -j) / (2.0 * m + 2.0);
    }
    case WidthRegime::RhoLarge:
      return std::pow(2.0, 0.5 * j) * std::sqrt(2.0 * n + 2.0);
  }
  return 0.0;
}

namespace {

constexpr double kRhoSmall = 0.05;
constexpr double kRhoLargeEta = 50.0;

// First crossing of g(d) = level for d = sign * t, t > 0, or NaN.
template <class G>
double first_crossing(const G& g, double level, int sign) {
  double prev_t = 0.0;
  double prev_v = g(0.0) - level;
  for (double t = 1e-9; t <= 1e6; t *= 1.01) {
    const double v = g(sign * t) - level;
    if ((prev_v < 0.0) != (v < 0.0)) {
      double lo = prev_t;
      double hi = t;
      double vlo = prev_v;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double vm = g(sign * mid) - level;
        if ((vm < 0.0) == (vlo < 0.0)) {
          lo = mid;
          vlo = vm;
        } else {
          hi = mid;
        }
      }
      return sign * 0.5 * (lo + hi);
    }
    prev_t = t;
    prev_v = v;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

WidthProbe band_width_probe_detail(int m, int n, int j, WidthRegime regime, std::optional<double> eta_center) {
  if (m < 0 || n < 0) throw InvalidArgument("band_width_probe: negative mode index");
  const PhaseParams q{m, n, 0, -1, -1};
  const double lambda = lambda_coeff(m, n, -1, -1);
  const double Lambda = 1.0 / lambda;

  double eta_c = 0.0;
  if (eta_center) {
    eta_c = *eta_center;
  } else if (regime == WidthRegime::RhoSmall) {
    eta_c = std::sqrt(kRhoSmall * std::ldexp(1.0, j) * m);
  } else if (regime == WidthRegime::RhoLarge) {
    eta_c = kRhoLargeEta;
  }

  const double norm = std::sqrt(1.0 + Lambda * Lambda);
  const double nx = 1.0 / norm;
  const double ny = -Lambda / norm;
  const double x0 = Lambda * eta_c;
  const double y0 = eta_c;
  auto g = [&](double d) { return dphase_deta(q, x0 + d * nx, y0 + d * ny); };

  const double inner = -std::ldexp(1.0, -(j + 1));
  const double outer = -std::ldexp(1.0, -j);
  for (int sign : {1, -1}) {
    const double d1 = first_crossing(g, inner, sign);
    if (std::isnan(d1)) continue;
    const double d2 = first_crossing(g, outer, sign);
    if (std::isnan(d2)) continue;
    WidthProbe out;
    out.measured_width = std::abs(d2 - d1);
    out.base_eta = eta_c;
    out.reference_scale = band_width_reference(m, n, j, regime, eta_c);
    return out;
  }
  throw BracketFailure("band_width_probe: level set {" + std::to_string(outer) + " <= d_eta phi <= " +
                       std::to_string(inner) + "} is empty in the probed window");
}

double band_width_probe(int m, int n, int j, WidthRegime regime, std::optional<double> eta_center) {
  return band_width_probe_detail(m, n, j, regime, eta_center).measured_width;
}

}  // namespace reslab
