#include "reslab/resonance_enum.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "reslab/errors.hpp"
#include "reslab/hermite_basis.hpp"

namespace reslab {

std::int64_t exact_isqrt(std::int64_t v) {
  if (v < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r * r == v ? r : -1;
}

bool is_resonant(std::int64_t m, std::int64_t n, std::int64_t p) {
  if (m < 0 || n < 0 || p < 0) throw InvalidArgument("is_resonant: negative mode index");
  if (m > kMaxExactIndex || n > kMaxExactIndex || p > kMaxExactIndex) {
    throw IntegerOverflow("is_resonant: indices above 2^30 exceed the exact int64 range");
  }
  // Same polynomial, arranged so every intermediate fits in int64.
  const std::int64_t d = p - m - n - 1;
  return d * d == 4 * (m + 1) * (n + 1);
}

std::vector<ModeTriple> enumerate(int max_mode, bool massless) {
  if (max_mode < 0) throw InvalidArgument("enumerate: max_mode must be >= 0");
  const std::int64_t mu = massless ? 0 : 1;
  std::set<ModeTriple> found;
  for (std::int64_t x = 0; x <= max_mode; ++x) {
    const std::int64_t ax = 2 * x + 1 + mu;
    for (std::int64_t y = x; y <= max_mode; ++y) {
      const std::int64_t ay = 2 * y + 1 + mu;
      const std::int64_t s = exact_isqrt(ax * ay);
      if (s < 0) continue;
      const std::int64_t az = ax + ay + 2 * s;
      if ((az - 1 - mu) % 2 != 0) continue;
      const std::int64_t z = (az - 1 - mu) / 2;
      if (z > max_mode) continue;
      const int X = static_cast<int>(x), Y = static_cast<int>(y), Z = static_cast<int>(z);
      found.insert({X, Y, Z});
      found.insert({X, Z, Y});
      found.insert({Y, Z, X});
    }
  }
  return {found.begin(), found.end()};
}

std::vector<ModeTriple> enumerate_brute_force(int max_mode) {
  std::vector<ModeTriple> out;
  for (int m = 0; m <= max_mode; ++m)
    for (int n = m; n <= max_mode; ++n)
      for (int p = 0; p <= max_mode; ++p)
        if (is_resonant(m, n, p)) out.push_back({m, n, p});
  return out;
}

std::vector<ResonantTriple> interactions_for_output(int p, int max_mode, Gate gate) {
  if (p < 0 || p > max_mode) throw InvalidArgument("interactions_for_output: need 0 <= p <= max_mode");
  std::vector<ResonantTriple> out;
  for (int m = 0; m <= max_mode; ++m) {
    for (int n = 0; n <= max_mode; ++n) {
      for (int alpha : {-1, 1}) {
        for (int beta : {-1, 1}) {
          if (m == n && alpha == -beta) continue;
          const PhaseParams q{m, n, p, alpha, beta};
          if (classify(q, gate).tag != ResonanceTag::SpaceTimeResonantLine) continue;
          ResonantTriple t;
          t.m = m;
          t.n = n;
          t.p = p;
          t.alpha = alpha;
          t.beta = beta;
          t.lambda = lambda_coeff(m, n, alpha, beta);
          t.coupling = triple_product(m, n, p);
          out.push_back(t);
        }
      }
    }
  }
  return out;
}

std::vector<GateDisagreement> gate_disagreements(int max_mode) {
  std::vector<GateDisagreement> out;
  for (int p = 0; p <= max_mode; ++p)
    for (int m = 0; m <= max_mode; ++m)
      for (int n = 0; n <= max_mode; ++n)
        for (int alpha : {-1, 1})
          for (int beta : {-1, 1}) {
            if (m == n && alpha == -beta) continue;
            const PhaseParams q{m, n, p, alpha, beta};
            const bool a = classify(q, Gate::AsPrinted).tag == ResonanceTag::SpaceTimeResonantLine;
            const bool b = classify(q, Gate::SqrtCharacterization).tag == ResonanceTag::SpaceTimeResonantLine;
            if (a != b) out.push_back({m, n, p, alpha, beta, a, b});
          }
  return out;
}

}  // namespace reslab
