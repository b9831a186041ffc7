// Twisted traces on A(P, q) represented by their moments c_i = T(Z^i), with
// the generating function w(z) = sum_i c_i z^-i written as a theta quotient.
//
// A trace for the twist g_l exists on the Laurent part exactly when
// w(q^-1 z) = z^l w(q z), i.e. w(q^2 z) = q^-l z^-l w(z).

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtrace/laurent.hpp"
#include "qtrace/qweyl_algebra.hpp"
#include "qtrace/theta.hpp"

namespace qtrace {

/// Raised when an element pairs with moments outside the stored window.
class WindowTooSmall : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// w(z) = c * z^l_power * prod theta(z / zeros_i) / prod theta(z / poles_j).
struct TraceAnsatz {
  cplx c{1.0, 0.0};
  int l_power = 0;
  std::vector<cplx> zeros;
  std::vector<cplx> poles;
  AlgebraParams params;

  cplx operator()(cplx z) const;
};

class MomentTable {
 public:
  MomentTable() = default;
  /// values[i + W] = c_i for i in [-W, W].
  MomentTable(int W, std::vector<cplx> values, bool normalized);

  int W() const { return W_; }
  bool normalized() const { return normalized_; }
  const std::vector<cplx>& values() const { return values_; }
  bool contains(int i) const { return i >= -W_ && i <= W_; }
  /// Throws WindowTooSmall outside [-W, W].
  cplx at(int i) const;
  cplx& at(int i);

  /// Divides by c_0; throws std::domain_error if c_0 vanishes.
  MomentTable normalize() const;
  /// The same table restricted to a smaller window.
  MomentTable truncate(int W) const;

  /// max |c_{-i} - conj(c_i)|.
  double conjugate_symmetry_defect() const;

  /// w as a bilateral series: coefficient of z^j is c_{-j}.
  BilateralSeries w_series() const;

 private:
  int W_ = 0;
  std::vector<cplx> values_{cplx{}};
  bool normalized_ = false;
};

struct DecayReport {
  double kappa_plus = 0.0;
  double kappa_minus = 0.0;
  int poly_exp_a = 0;
  int poly_exp_b = 0;
  double fit_residual = 0.0;
  bool decay_ok = false;  // both kappas strictly below 1
  std::string note;
};

struct ResidualReport {
  double max_residual = 0.0;   // relative to max(|T(ab)|, 1)
  double mean_residual = 0.0;
  double max_scaled_residual = 0.0;  // relative to the sum of |r_i c_i| on both sides
  int samples = 0;
  std::uint64_t seed = 0;
};

struct QuasiPeriodicityReport {
  double max_residual = 0.0;            // w(q^-1 z) = z^l w(q z)
  double with_P_residual = 0.0;         // the same identity multiplied by P(z)
  double published_form_residual = 0.0;  // w(q^-1 z) = q^l z^l w(q z)
  int samples = 0;
  int skipped = 0;  // points on a pole orbit
};

/// { r / q : r a root of P with q < |r| < 1/q }, with multiplicity.
std::vector<cplx> poles_from_P(const AlgebraParams& params);

enum class CountRule {
  Multiplier,  // N = M + l, product (-1)^l q^-l prod(beta)
  Published,   // N = M - l, product q^l prod(beta)
};

struct ZeroCount {
  int N = 0;
  cplx product_target{1.0, 0.0};
  /// With N = 0 there is nothing to adjust: the empty product must already equal the target.
  bool product_attainable = true;
  bool feasible() const { return N >= 0 && product_attainable; }
};

struct ConstraintSolution {
  int M = 0;
  int l = 0;
  ZeroCount multiplier_rule;
  ZeroCount published_rule;
  CountRule primary = CountRule::Multiplier;

  const ZeroCount& selected() const { return primary == CountRule::Multiplier ? multiplier_rule : published_rule; }
  int N() const { return selected().N; }
  cplx product_target() const { return selected().product_target; }
  bool feasible() const { return selected().feasible(); }
  bool rules_agree() const { return multiplier_rule.N == published_rule.N; }
};

/// Equates the multiplier of a quotient with N zeros and the given poles with
/// the one demanded by w(q^2 z) = q^-l z^-l w(z). For N = 0 this is a condition on the
/// phase of prod(poles), which a rotation of Z changes.
ConstraintSolution solve_constraints(const AlgebraParams& params, std::span<const cplx> poles,
                                     CountRule primary = CountRule::Multiplier);

struct GaugeResult {
  TraceAnsatz ansatz;
  /// psi with zeros, poles -> e^{-i psi} (.) and P(z) -> P(e^{i psi} z).
  double phase = 0.0;
};

/// Rotates so that prod(poles) = q^-M is real positive.
/// Throws std::invalid_argument if |prod(poles)| differs from q^-M by more than 1e-8 relative.
GaugeResult gauge_normalize(const TraceAnsatz& ansatz);

/// Rotates the whole configuration by z -> e^{i psi} z (see GaugeResult).
TraceAnsatz rotate(const TraceAnsatz& ansatz, double psi);

/// Default sample count: max(4096, 8W) rounded up to a power of two.
int default_sample_count(int W);

/// Fourier coefficients of w on the unit circle: c_i = mean_s w(z_s) z_s^i.
/// samples = 0 selects default_sample_count(W); otherwise it must be a power of two >= 8W.
/// Throws EvaluationSingularity if a pole orbit comes within 1e-6 of the unit circle.
MomentTable moments(const TraceAnsatz& ansatz, int W, int samples = 0);

struct LinearSystemResult {
  bool feasible = false;
  MomentTable moments;  // normalized, on [-W, W]; empty when infeasible
  int nullspace_dim = 0;
  int system_window = 0;
  bool window_capped = false;
  std::vector<double> singular_values;  // relative, ascending, smallest few
  std::string diagnostic;
};

/// Moments from the trace condition alone, T(P(q^-1 Z)S(q^-1 Z)) = q^-l T(P(qZ)S(qZ)Z^-l)
/// for S = Z^j, solved on a decay-compatible window.
LinearSystemResult moments_by_linear_system(const AlgebraParams& params, int W, double threshold = 1e-8);

/// Largest normalized residual of the trace-condition rows that lie entirely inside the window.
double linear_system_residual(const AlgebraParams& params, const MomentTable& mt);

/// sum r_i c_i over the degree-zero part of a. Throws WindowTooSmall on support overflow.
cplx trace_of(const AlgebraElement& a, const MomentTable& mt);
/// sum |r_i c_i|, the scale of the rounding error in trace_of.
double trace_magnitude(const AlgebraElement& a, const MomentTable& mt);

/// Random element with ladder degree in [-max_ladder, max_ladder], Z-degree in
/// [-max_zdeg, max_zdeg], coefficients uniform on the unit disk.
AlgebraElement random_element(std::mt19937_64& rng, int max_ladder = 2, int max_zdeg = 3);

/// Uniform on the closed unit disk, independent of the standard library's distributions.
cplx random_unit_disk(std::mt19937_64& rng);

/// |T(ab) - T(b g(a))| / max(|T(ab)|, 1) over seeded random pairs. The scaled residual divides
/// by sum |r_i c_i| instead, which is what rounding error is proportional to.
ResidualReport verify_twisted_trace(const MomentTable& mt, const AlgebraParams& params, int trials,
                                    std::uint64_t seed);

/// Relative residual of the functional equation on |z| = 1, q^{1/2}, q^{-1/2}.
QuasiPeriodicityReport verify_quasiperiodicity(const TraceAnsatz& ansatz, int samples);

/// Log-linear fit of |c_{+-N}| ~ kappa^N N^a over N in [W/2, W]. Requires W >= 16.
DecayReport decay_fit(const MomentTable& mt);

}  // namespace qtrace
