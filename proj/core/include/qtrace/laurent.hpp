// Laurent polynomials, truncated bilateral series and the kernel theory of
// multiplication by a Laurent polynomial on C[[z, z^-1]].
//
// Coefficients are double-precision complex numbers. Bilateral series carry an
// explicit window [lo, hi] (lo <= 0 <= hi); everything outside the window is
// treated as unknown, so identities involving products only hold on an
// interior sub-window.

#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qtrace {

using cplx = std::complex<double>;

/// Closed integer range of exponents.
struct Window {
  int lo = 0;
  int hi = 0;

  int size() const { return hi >= lo ? hi - lo + 1 : 0; }
  bool contains(int i) const { return i >= lo && i <= hi; }
  bool empty() const { return hi < lo; }
  friend bool operator==(const Window&, const Window&) = default;
};

Window intersect(const Window& a, const Window& b);

/// Finite-support Laurent polynomial sum_i c_i z^i.
///
/// The stored form is canonical: coefficients smaller than
/// kPruneRelative * max|c_i| are dropped on construction.
class LaurentPoly {
 public:
  static constexpr double kPruneRelative = 1e-14;

  LaurentPoly() = default;
  explicit LaurentPoly(std::map<int, cplx> coeffs);

  static LaurentPoly constant(cplx c);
  static LaurentPoly monomial(int exponent, cplx c = 1.0);

  const std::map<int, cplx>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  cplx coeff(int exponent) const;

  // Both return 0 for the zero polynomial.
  int min_exp() const;
  int max_exp() const;
  int spread() const { return max_exp() - min_exp(); }
  double max_abs_coeff() const;

  cplx operator()(cplx z) const;

  LaurentPoly& operator+=(const LaurentPoly& other);
  LaurentPoly& operator-=(const LaurentPoly& other);
  LaurentPoly& operator*=(cplx s);

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(LaurentPoly a, cplx s) { return a *= s; }
  friend LaurentPoly operator*(cplx s, LaurentPoly a) { return a *= s; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);

 private:
  void canonicalize();

  std::map<int, cplx> coeffs_;
};

/// Largest coefficient-wise difference.
double max_abs_diff(const LaurentPoly& a, const LaurentPoly& b);

/// Truncated two-sided power series sum_{i=lo}^{hi} a_i z^i.
class BilateralSeries {
 public:
  BilateralSeries() = default;
  BilateralSeries(Window window, std::vector<cplx> coeffs, std::string note = {});

  static BilateralSeries zeros(Window window, std::string note = {});
  static BilateralSeries from_poly(const LaurentPoly& p, Window window);

  const Window& window() const { return window_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  const std::string& note() const { return note_; }

  // Zero outside the window.
  cplx operator[](int exponent) const;
  cplx& at(int exponent);

  double max_abs() const;
  /// max |a_i| over the part of `sub` that lies inside the window.
  double max_abs(const Window& sub) const;

 private:
  Window window_{0, 0};
  std::vector<cplx> coeffs_{cplx{}};
  std::string note_;
};

/// Sum over the intersection window (recorded in the note).
BilateralSeries operator+(const BilateralSeries& a, const BilateralSeries& b);
BilateralSeries operator-(const BilateralSeries& a, const BilateralSeries& b);

/// p * s on the window of s; coefficients that need data from outside the
/// window are computed with zeros there (see interior()).
BilateralSeries multiply(const LaurentPoly& p, const BilateralSeries& s);

/// Exponents of p * s that are exact given only the window of s.
Window interior(const Window& w, const LaurentPoly& p);

/// Constant term.
cplx ct(const LaurentPoly& p);
cplx ct(const BilateralSeries& s);

/// z -> c z, i.e. the coefficient of z^i is multiplied by c^i.
LaurentPoly scale_arg(const LaurentPoly& p, cplx c);
BilateralSeries scale_arg(const BilateralSeries& s, cplx c);

/// p(z) -> conj(p)(z^-1): coefficient of z^i becomes conj of the coefficient of z^-i.
LaurentPoly conj_invol(const LaurentPoly& p);

bool is_self_conjugate(const LaurentPoly& p, double tol = 1e-12);

struct Root {
  cplx location;
  int multiplicity = 1;
};

/// Nonzero roots of a Laurent polynomial with multiplicities, such that
/// p(z) = leading_coeff * z^leading_exponent * prod (z - r)^m.
struct RootData {
  std::vector<Root> roots;
  int leading_exponent = 0;
  cplx leading_coeff{1.0, 0.0};

  /// n: the number of nonzero roots counted with multiplicity.
  int count() const;
  cplx evaluate(cplx z) const;
};

/// Companion-matrix roots of z^{-min_exp} p with balancing and Newton polish.
/// Roots closer than cluster_tol are merged (default 1e-7 * max|root|).
/// Throws std::invalid_argument for the zero polynomial.
RootData roots(const LaurentPoly& p, std::optional<double> cluster_tol = std::nullopt);

/// Inverse in C((z)): support bounded below, p * result = 1 away from the top edge.
BilateralSeries right_inverse(const LaurentPoly& p, Window window);

/// Inverse in C((z^-1)): support bounded above.
BilateralSeries left_inverse(const LaurentPoly& p, Window window);

/// Basis of the kernel of multiplication by p on C[[z, z^-1]]:
/// f_{i,j} = sum_l l(l-1)...(l-i+1) alpha_j^{-l} z^l, i < multiplicity of alpha_j.
/// Throws std::invalid_argument if a root is zero.
std::vector<BilateralSeries> kernel_basis(const RootData& rd, Window window);

/// s with s * p = target on the interior window, via
/// s = target_+ * P_r^-1 + target_- * P_l^-1.
BilateralSeries solve_division(const BilateralSeries& target, const LaurentPoly& p);

}  // namespace qtrace
