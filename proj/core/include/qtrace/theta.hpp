// Multiplicative Jacobi theta function with nome q in the integral-weight
// normalization
//
//   theta(z) = (z - 1) * prod_{m >= 1} (1 - q^{2m} z)(1 - q^{2m} / z),
//
// which vanishes exactly on q^{2Z} and satisfies theta(q^2 z) = -z^{-1} theta(z).

#pragma once

#include <span>
#include <stdexcept>

#include "qtrace/laurent.hpp"

namespace qtrace {

/// Thrown when a theta quotient is evaluated too close to a pole.
class EvaluationSingularity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ThetaParams {
  double q = 0.5;
  int trunc_terms = 0;

  /// Picks trunc_terms so that q^{2 trunc_terms} < 1e-16. Rejects q outside (0, 0.9).
  static ThetaParams make(double q);
};

cplx theta_hat(cplx z, const ThetaParams& params);

/// c z^l prod theta(z / zeros_i) / prod theta(z / poles_j).
/// Throws EvaluationSingularity when z is within 1e-9 (relative) of a pole orbit.
cplx theta_quotient(cplx z, std::span<const cplx> zeros, std::span<const cplx> poles, int l, cplx c,
                    const ThetaParams& params);

/// Distance from z to the nearest point of the orbit base * q^{2Z}, relative to |z|.
double orbit_distance(cplx z, cplx base, double q);

struct Multiplier {
  int zpow = 0;
  cplx constant{1.0, 0.0};
};

/// f(q^2 z) = constant * z^zpow * f(z) for f = theta_quotient(., zeros, poles, l, c).
Multiplier multiplier(std::span<const cplx> zeros, std::span<const cplx> poles, int l, const ThetaParams& params);

}  // namespace qtrace
