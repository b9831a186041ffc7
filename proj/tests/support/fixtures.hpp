// Shared configurations for the test suite.

#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qtrace/positivity.hpp"

namespace qtrace::testing {

inline constexpr double kFlagshipQ = 0.5;

/// z + z^-1 - (1.2 + 1/1.2): roots 1.2 and 1/1.2, n = 2.
inline LaurentPoly flagship_P() {
  return LaurentPoly(std::map<int, cplx>{{-1, 1.0}, {0, -(1.2 + 1.0 / 1.2)}, {1, 1.0}});
}

inline ClassifyOptions flagship_options(int k = 1) {
  ClassifyOptions o;
  o.q = kFlagshipQ;
  o.P = flagship_P();
  o.k = k;
  return o;
}

inline LaurentPoly linear(cplx root) { return LaurentPoly(std::map<int, cplx>{{0, -root}, {1, 1.0}}); }

/// z^{-n/2} prod (z - r), rotated by a unit phase so that conj_invol(P) = P.
/// The roots must be closed under r -> 1/conj(r) (n even).
inline LaurentPoly self_conjugate_from_roots(const std::vector<cplx>& rs) {
  LaurentPoly p = LaurentPoly::monomial(-static_cast<int>(rs.size()) / 2);
  for (const cplx& r : rs) p = p * linear(r);
  const int m = p.max_exp();
  const double a = -std::arg(p.coeff(m) / std::conj(p.coeff(-m))) / 2.0;
  return p * std::polar(1.0, a);
}

inline double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Random self-conjugate P with `pairs` root pairs (r, 1/conj r), all inside q < |z| < 1/q.
inline LaurentPoly random_self_conjugate(std::mt19937_64& rng, double q, int pairs) {
  std::vector<cplx> rs;
  for (int i = 0; i < pairs; ++i) {
    const double mod = std::max(1.02, std::exp(uniform(rng) * 0.9 * std::log(1.0 / q)));
    const cplx r = std::polar(mod, 2.0 * std::numbers::pi * uniform(rng));
    rs.push_back(r);
    rs.push_back(1.0 / std::conj(r));
  }
  return self_conjugate_from_roots(rs);
}

/// Random P with `pairs` root pairs in the annulus and prod(roots) = 1, so that at k = pairs the
/// N = 0 product constraint holds. The trace is then unique up to scale and T(u rho(u)) flips sign
/// with P; the sign is fixed from the linear-system moments so that T(u rho(u)) > 0.
/// Returns an empty polynomial if the linear system does not single out one trace.
inline LaurentPoly random_half_n(std::mt19937_64& rng, double q, int pairs) {
  std::vector<cplx> rs;
  double total = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const double mod = std::max(1.02, std::exp(uniform(rng) * 0.9 * std::log(1.0 / q)));
    const double angle = 2.0 * std::numbers::pi * uniform(rng);
    const double a = i + 1 < pairs ? angle : -total;
    total += a;
    const cplx r = std::polar(mod, a);
    rs.push_back(r);
    rs.push_back(1.0 / std::conj(r));
  }
  const LaurentPoly P = self_conjugate_from_roots(rs);
  // The orientation probe selects the engine conjugation rho_{-k}, twist g_{-2k}.
  const AlgebraParams params = AlgebraParams::from_conjugation(q, P, -pairs);
  const LinearSystemResult ls = moments_by_linear_system(params, 24);
  if (ls.feasible && ls.nullspace_dim == 1) {
    const AlgebraElement u = AlgebraElement::u();
    const cplx h = trace_of(multiply(u, apply_rho(u, params), params), ls.moments);
    return h.real() > 0 ? P : P * cplx{-1.0};
  }
  return {};
}

}  // namespace qtrace::testing
