// Normal-ordered arithmetic in the generalized q-Weyl algebra A(P, q):
//
//   Z u Z^-1 = q^2 u,  Z v Z^-1 = q^-2 v,  u v = P(q^-1 Z),  v u = P(q Z).
//
// Elements are stored as sums of ladder monomials with the Z-dependence on the
// right: u^m R(Z) for m > 0, v^|m| R(Z) for m < 0, R(Z) for m = 0.

#pragma once

#include <map>
#include <string>

#include "qtrace/laurent.hpp"

namespace qtrace {

struct AlgebraParams {
  double q = 0.5;
  LaurentPoly P;
  int k = 0;  // conjugation parameter: rho(u) = Z^k q^k v
  int l = 0;  // twist exponent: g(u) = q^l Z^-l u, g(v) = q^l Z^l v

  /// Twisted traces for g_l; rho is not available unless P is self-conjugate.
  static AlgebraParams with_twist(double q, LaurentPoly P, int l);
  /// The conjugation rho_k and its square g_{2k}; requires conj_invol(P) = P.
  static AlgebraParams from_conjugation(double q, LaurentPoly P, int k);

  bool self_conjugate() const { return is_self_conjugate(P); }
};

/// Validates 0 < q < 1, P != 0 and that P has no root of modulus q or 1/q.
/// Throws std::invalid_argument with a readable message.
void validate_params(const AlgebraParams& params);

class AlgebraElement {
 public:
  AlgebraElement() = default;
  explicit AlgebraElement(std::map<int, LaurentPoly> terms);

  static AlgebraElement scalar(cplx c);
  static AlgebraElement from_poly(LaurentPoly r);
  /// u^m R(Z) (m > 0), v^-m R(Z) (m < 0).
  static AlgebraElement ladder(int m, LaurentPoly r = LaurentPoly::constant(1.0));
  static AlgebraElement u() { return ladder(1); }
  static AlgebraElement v() { return ladder(-1); }
  static AlgebraElement Z(int power = 1) { return from_poly(LaurentPoly::monomial(power)); }

  const std::map<int, LaurentPoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  const LaurentPoly* term(int m) const;

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(cplx s);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(cplx s, AlgebraElement a) { return a *= s; }

 private:
  void prune();

  std::map<int, LaurentPoly> terms_;
};

/// Term-wise maximum coefficient difference.
double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b);
double max_abs_coeff(const AlgebraElement& a);

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b, const AlgebraParams& params);

/// The twist automorphism g_l.
AlgebraElement apply_g(const AlgebraElement& a, const AlgebraParams& params);

/// The antilinear conjugation rho_k. Throws std::invalid_argument unless P is self-conjugate.
AlgebraElement apply_rho(const AlgebraElement& a, const AlgebraParams& params);

/// The m = 0 component.
LaurentPoly degree_zero_part(const AlgebraElement& a);

enum class AlgebraMap { Twist, Conjugation };

struct RelationReport {
  double z_u = 0.0;   // Z u Z^-1 = q^2 u
  double z_v = 0.0;   // Z v Z^-1 = q^-2 v
  double u_v = 0.0;   // u v = P(q^-1 Z)
  double v_u = 0.0;   // v u = P(q Z)
  double max_residual() const;
};

/// Applies the map to both sides of every defining relation and reports the residuals.
/// Works for non-self-conjugate P as well (the residual then exposes the failure).
RelationReport check_relations_preserved(AlgebraMap map, const AlgebraParams& params);

std::string to_string(const AlgebraElement& a);

}  // namespace qtrace
