#include "qtrace/qweyl_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qtrace {

AlgebraParams AlgebraParams::with_twist(double q, LaurentPoly P, int l) {
  AlgebraParams p{q, std::move(P), 0, l};
  validate_params(p);
  return p;
}

AlgebraParams AlgebraParams::from_conjugation(double q, LaurentPoly P, int k) {
  AlgebraParams p{q, std::move(P), k, 2 * k};
  validate_params(p);
  if (!p.self_conjugate())
    throw std::invalid_argument("rho requires P(z) = conj(P)(1/z); P is not self-conjugate");
  return p;
}

void validate_params(const AlgebraParams& params) {
  if (!(params.q > 0.0 && params.q < 1.0)) throw std::invalid_argument("q must lie in (0,1)");
  if (params.P.is_zero()) throw std::invalid_argument("P must be a nonzero Laurent polynomial");
  const auto rd = roots(params.P);
  for (const auto& r : rd.roots) {
    const double m = std::abs(r.location);
    for (const double bad : {params.q, 1.0 / params.q}) {
      if (std::abs(m - bad) <= 1e-9 * bad) {
        std::ostringstream os;
        os << "P has a root of modulus " << m << " = q^" << (bad < 1.0 ? "1" : "-1")
           << "; roots on |z| = q^{+-1} are not supported";
        throw std::invalid_argument(os.str());
      }
    }
  }
}

// ------------------------------------------------------------- AlgebraElement

AlgebraElement::AlgebraElement(std::map<int, LaurentPoly> terms) : terms_(std::move(terms)) { prune(); }

AlgebraElement AlgebraElement::scalar(cplx c) { return from_poly(LaurentPoly::constant(c)); }

AlgebraElement AlgebraElement::from_poly(LaurentPoly r) { return ladder(0, std::move(r)); }

AlgebraElement AlgebraElement::ladder(int m, LaurentPoly r) {
  return AlgebraElement(std::map<int, LaurentPoly>{{m, std::move(r)}});
}

const LaurentPoly* AlgebraElement::term(int m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? nullptr : &it->second;
}

void AlgebraElement::prune() {
  std::erase_if(terms_, [](const auto& kv) { return kv.second.is_zero(); });
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  for (const auto& [m, r] : other.terms_) terms_[m] += r;
  prune();
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  for (const auto& [m, r] : other.terms_) terms_[m] -= r;
  prune();
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(cplx s) {
  for (auto& [m, r] : terms_) r *= s;
  prune();
  return *this;
}

double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b) {
  double d = 0.0;
  const LaurentPoly zero;
  for (const auto& [m, r] : a.terms()) {
    const auto* other = b.term(m);
    d = std::max(d, max_abs_diff(r, other ? *other : zero));
  }
  for (const auto& [m, r] : b.terms())
    if (!a.term(m)) d = std::max(d, r.max_abs_coeff());
  return d;
}

double max_abs_coeff(const AlgebraElement& a) {
  double m = 0.0;
  for (const auto& [deg, r] : a.terms()) m = std::max(m, r.max_abs_coeff());
  return m;
}

// ----------------------------------------------------------- multiplication

namespace {

// X_{m1} Y_{m2} = L_{m1+m2} Q(Z), where X, Y are u- or v-powers.
LaurentPoly ladder_product_factor(int m1, int m2, const AlgebraParams& params) {
  LaurentPoly q_poly = LaurentPoly::constant(1.0);
  if (m1 > 0 && m2 < 0) {
    // u^a v^b = u^{a-1} v^{b-1} P(q^{1-2b} Z)
    const int a = m1, b = -m2;
    for (int t = 0; t < std::min(a, b); ++t)
      q_poly = q_poly * scale_arg(params.P, std::pow(params.q, 1 - 2 * (b - t)));
  } else if (m1 < 0 && m2 > 0) {
    // v^a u^b = v^{a-1} u^{b-1} P(q^{2b-1} Z)
    const int a = -m1, b = m2;
    for (int t = 0; t < std::min(a, b); ++t)
      q_poly = q_poly * scale_arg(params.P, std::pow(params.q, 2 * (b - t) - 1));
  }
  return q_poly;
}

}  // namespace

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b, const AlgebraParams& params) {
  std::map<int, LaurentPoly> out;
  for (const auto& [m1, r1] : a.terms()) {
    for (const auto& [m2, r2] : b.terms()) {
      // R1(Z) Y_{m2} = Y_{m2} R1(q^{2 m2} Z)
      const LaurentPoly moved = m2 == 0 ? r1 : scale_arg(r1, std::pow(params.q, 2 * m2));
      out[m1 + m2] += ladder_product_factor(m1, m2, params) * moved * r2;
    }
  }
  return AlgebraElement(std::move(out));
}

namespace {

AlgebraElement power(const AlgebraElement& x, int n, const AlgebraParams& params) {
  AlgebraElement acc = AlgebraElement::scalar(1.0);
  for (int i = 0; i < n; ++i) acc = multiply(acc, x, params);
  return acc;
}

// Extends generator images multiplicatively: u^m R(Z) -> img_u^m * R'(Z).
template <class PolyMap>
AlgebraElement extend(const AlgebraElement& a, const AlgebraElement& img_u, const AlgebraElement& img_v,
                      PolyMap&& poly_map, const AlgebraParams& params) {
  AlgebraElement out;
  for (const auto& [m, r] : a.terms()) {
    const AlgebraElement head = m > 0 ? power(img_u, m, params) : power(img_v, -m, params);
    out += multiply(head, AlgebraElement::from_poly(poly_map(r)), params);
  }
  return out;
}

AlgebraElement g_impl(const AlgebraElement& a, const AlgebraParams& params) {
  const double ql = std::pow(params.q, params.l);
  const auto img_u = multiply(AlgebraElement::from_poly(LaurentPoly::monomial(-params.l, ql)),
                              AlgebraElement::u(), params);
  const auto img_v = multiply(AlgebraElement::from_poly(LaurentPoly::monomial(params.l, ql)),
                              AlgebraElement::v(), params);
  return extend(a, img_u, img_v, [](const LaurentPoly& r) { return r; }, params);
}

AlgebraElement rho_impl(const AlgebraElement& a, const AlgebraParams& params) {
  const double qk = std::pow(params.q, params.k);
  const auto img_u = multiply(AlgebraElement::from_poly(LaurentPoly::monomial(params.k, qk)),
                              AlgebraElement::v(), params);
  const auto img_v = multiply(AlgebraElement::from_poly(LaurentPoly::monomial(-params.k, qk)),
                              AlgebraElement::u(), params);
  return extend(a, img_u, img_v, [](const LaurentPoly& r) { return conj_invol(r); }, params);
}

}  // namespace

AlgebraElement apply_g(const AlgebraElement& a, const AlgebraParams& params) { return g_impl(a, params); }

AlgebraElement apply_rho(const AlgebraElement& a, const AlgebraParams& params) {
  if (!params.self_conjugate())
    throw std::invalid_argument("apply_rho: P is not self-conjugate, rho is not well-defined");
  return rho_impl(a, params);
}

LaurentPoly degree_zero_part(const AlgebraElement& a) {
  const auto* t = a.term(0);
  return t ? *t : LaurentPoly{};
}

double RelationReport::max_residual() const { return std::max({z_u, z_v, u_v, v_u}); }

RelationReport check_relations_preserved(AlgebraMap map, const AlgebraParams& params) {
  auto phi = [&](const AlgebraElement& x) {
    return map == AlgebraMap::Twist ? g_impl(x, params) : rho_impl(x, params);
  };
  auto prod = [&](const AlgebraElement& x, const AlgebraElement& y) { return multiply(x, y, params); };
  auto residual = [](const AlgebraElement& lhs, const AlgebraElement& rhs) {
    return max_abs_diff(lhs, rhs) / std::max(1.0, max_abs_coeff(rhs));
  };

  const auto u = AlgebraElement::u();
  const auto v = AlgebraElement::v();
  const auto z = AlgebraElement::Z(1);
  const auto zinv = AlgebraElement::Z(-1);
  const double q2 = params.q * params.q;

  RelationReport rep;
  rep.z_u = residual(prod(prod(phi(z), phi(u)), phi(zinv)), phi(q2 * u));
  rep.z_v = residual(prod(prod(phi(z), phi(v)), phi(zinv)), phi((1.0 / q2) * v));
  rep.u_v = residual(prod(phi(u), phi(v)),
                     phi(AlgebraElement::from_poly(scale_arg(params.P, 1.0 / params.q))));
  rep.v_u = residual(prod(phi(v), phi(u)), phi(AlgebraElement::from_poly(scale_arg(params.P, params.q))));
  return rep;
}

std::string to_string(const AlgebraElement& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, r] : a.terms()) {
    if (!first) os << " + ";
    first = false;
    if (m > 0) os << "u^" << m << "*";
    if (m < 0) os << "v^" << -m << "*";
    os << "(";
    bool inner_first = true;
    for (const auto& [e, c] : r.coeffs()) {
      if (!inner_first) os << " + ";
      inner_first = false;
      os << c << "Z^" << e;
    }
    os << ")";
  }
  return os.str();
}

}  // namespace qtrace
