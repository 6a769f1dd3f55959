#pragma once

#include <cstdint>
#include <vector>

#include "reslab/phase_analysis.hpp"

namespace reslab {

/// Largest index accepted by the exact integer tests.
inline constexpr std::int64_t kMaxExactIndex = std::int64_t{1} << 30;

/// m^2+n^2+p^2-2mn-2pm-2pn-2m-2n-2p-3 == 0, in exact int64 arithmetic.
/// Throws IntegerOverflow for indices above kMaxExactIndex.
bool is_resonant(std::int64_t m, std::int64_t n, std::int64_t p);

/// Integer square root when v is a perfect square, otherwise -1.
std::int64_t exact_isqrt(std::int64_t v);

struct ModeTriple {
  int m = 0;
  int n = 0;
  int p = 0;
  auto operator<=>(const ModeTriple&) const = default;
};

/// All (m, n, p) with m <= n and every index <= max_mode passing is_resonant,
/// sorted lexicographically. O(max_mode^2): for x <= y with (x+1)(y+1) a
/// perfect square s^2 the third root is z = x + y + 1 + 2s.
/// massless = true uses offsets 2k+1 in place of 2k+2 and yields no triples.
std::vector<ModeTriple> enumerate(int max_mode, bool massless = false);

/// Cubic scan of the polynomial, kept as a cross-check.
std::vector<ModeTriple> enumerate_brute_force(int max_mode);

struct ResonantTriple {
  int m = 0;
  int n = 0;
  int p = 0;
  int alpha = -1;
  int beta = -1;
  double lambda = 0.0;
  double coupling = 0.0;  // M(m, n, p)

  PhaseParams params() const { return {m, n, p, alpha, beta}; }
};

/// Ordered pairs (m, n) <= max_mode and sign pairs passing the gate, excluding
/// m == n with alpha == -beta. Order is lexicographic in (m, n, alpha, beta).
std::vector<ResonantTriple> interactions_for_output(int p, int max_mode, Gate gate);

struct GateDisagreement {
  int m, n, p, alpha, beta;
  bool printed;
  bool sqrt_gate;
};

/// Interactions (p <= max_mode) accepted by exactly one of the two gates.
std::vector<GateDisagreement> gate_disagreements(int max_mode);

}  // namespace reslab
