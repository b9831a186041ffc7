#include "qtrace/theta.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qtrace {

ThetaParams ThetaParams::make(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("q must lie in (0,1)");
  if (q >= 0.9) {
    std::ostringstream os;
    os << "q = " << q << " is too close to 1 for the product expansion; use q < 0.9";
    throw std::invalid_argument(os.str());
  }
  const int terms = static_cast<int>(std::ceil(std::log(1e-16) / (2.0 * std::log(q)))) + 1;
  return ThetaParams{q, std::max(terms, 1)};
}

cplx theta_hat(cplx z, const ThetaParams& params) {
  if (z == cplx{}) throw std::invalid_argument("theta_hat: z must be nonzero");
  const double q2 = params.q * params.q;
  const cplx zinv = 1.0 / z;
  const double big = std::max(std::abs(z), std::abs(zinv));
  cplx value = z - 1.0;
  double t = 1.0;
  // Keep going past trunc_terms while the factors still differ from 1 for large |z|.
  for (int m = 1;; ++m) {
    t *= q2;
    value *= (1.0 - t * z) * (1.0 - t * zinv);
    if (m >= params.trunc_terms && t * big < 1e-17) break;
  }
  return value;
}

double orbit_distance(cplx z, cplx base, double q) {
  const double ratio = std::abs(z) / std::abs(base);
  const double j = std::round(std::log(ratio) / (2.0 * std::log(q)));
  double best = std::abs(z - base * std::pow(q, 2.0 * j));
  for (const double dj : {-1.0, 1.0}) best = std::min(best, std::abs(z - base * std::pow(q, 2.0 * (j + dj))));
  return best / std::abs(z);
}

cplx theta_quotient(cplx z, std::span<const cplx> zeros, std::span<const cplx> poles, int l, cplx c,
                    const ThetaParams& params) {
  if (z == cplx{}) throw std::invalid_argument("theta_quotient: z must be nonzero");
  for (const cplx& b : poles) {
    if (orbit_distance(z, b, params.q) < 1e-9) {
      std::ostringstream os;
      os << "theta_quotient: z = " << z << " lies on the pole orbit of " << b;
      throw EvaluationSingularity(os.str());
    }
  }
  cplx value = c * std::pow(z, l);
  for (const cplx& a : zeros) value *= theta_hat(z / a, params);
  for (const cplx& b : poles) value /= theta_hat(z / b, params);
  return value;
}

Multiplier multiplier(std::span<const cplx> zeros, std::span<const cplx> poles, int l, const ThetaParams& params) {
  // theta(q^2 z / a) = -(a / z) theta(z / a) for every factor; (q^2 z)^l = q^{2l} z^l.
  Multiplier mult;
  mult.zpow = static_cast<int>(poles.size()) - static_cast<int>(zeros.size());
  cplx constant = std::pow(params.q, 2 * l);
  for (const cplx& a : zeros) constant *= -a;
  for (const cplx& b : poles) constant /= -b;
  mult.constant = constant;
  return mult;
}

}  // namespace qtrace
