// Positivity of twisted traces with respect to the conjugation rho_k, and the
// end-to-end classification of positive traces for a given (q, P, k).
//
// T is positive iff T(a rho(a)) > 0 on the two reducing subspaces C[Z, Z^-1]
// and u C[Z, Z^-1]; equivalently w and z^k P(z) w(q z) are nonnegative on the
// unit circle.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qtrace/trace_engine.hpp"

namespace qtrace {

enum class Verdict { Positive, NotPositive, Inconclusive };
std::string to_string(Verdict v);

struct GramReport {
  std::string basis;  // "laurent" or "u-sector"
  int m = 0;          // basis indices run over [-m, m]
  double min_eigenvalue = 0.0;     // of the unit-diagonal Hermitian part
  double min_pivot = 0.0;          // pivoted Cholesky of the same matrix
  double hermitian_defect = 0.0;   // max |G - G^*| / max |diag|
  double tolerance = 1e-10;
  bool positive_definite = false;  // min_eigenvalue > tolerance and Hermitian
  Verdict verdict = Verdict::Inconclusive;
};

/// G_ij = T(Z^i rho(Z^j)) = c_{i-j}, i, j in [-m, m].
Eigen::MatrixXcd laurent_gram_matrix(const MomentTable& mt, int m);
/// H_ij = T(e_i rho(e_j)) with e_i = u Z^i, computed through the algebra engine.
Eigen::MatrixXcd u_sector_gram_matrix(const MomentTable& mt, const AlgebraParams& params, int m);

/// Verdict for a Gram matrix. Diagonal scaling does not change definiteness, so the
/// test runs on D^-1/2 G D^-1/2.
GramReport gram_check(const Eigen::MatrixXcd& G, std::string basis, int m, double tol = 1e-10);

GramReport gram_laurent(const MomentTable& mt, int m, double tol = 1e-10);
GramReport gram_u_sector(const MomentTable& mt, const AlgebraParams& params, int m, double tol = 1e-10);

struct CirclePositivityReport {
  std::string function;  // "w" or "z^k P(z) w(qz)"
  double min_value = 0.0;
  double max_imag = 0.0;  // relative to max |f|
  int samples = 0;
  double tolerance = 1e-8;
  bool positive = false;
};

/// z^k P(z) w(q z), continued through the removable singularities at roots of P on the unit circle.
cplx u_sector_density(const TraceAnsatz& ansatz, cplx z);

/// Samples w and z^k P(z) w(qz) at `samples` uniform points of the unit circle.
/// min_value is relative to max |f|. Throws EvaluationSingularity on pole proximity.
std::pair<CirclePositivityReport, CirclePositivityReport> circle_positivity(const TraceAnsatz& ansatz, int samples,
                                                                           double tol = 1e-8);

/// q^-2 / conj(alpha), so that theta(z/alpha) theta(z/partner) = |theta(z/alpha)|^2 on |z| = 1.
cplx paired_partner(cplx alpha, double q);

struct PairedAnsatz {
  TraceAnsatz ansatz;
  double product_error = 0.0;  // |prod(zeros) - target| / |target|
  double phase_shift = 0.0;    // common rotation applied to the free zeros
  bool experimental = false;   // odd N: one self-paired zero of modulus 1/q
  bool degenerate = false;     // a zero of modulus in q^Z, which puts a zero of w or z^kPw(qz) on the circle
};

/// Zeros (a_i, paired_partner(a_i)), with the common phase of the free zeros fixed by the
/// product constraint. Throws std::invalid_argument when the
/// selected zero count is negative or free_params has the wrong length.
PairedAnsatz build_paired_ansatz(const AlgebraParams& params, std::span<const cplx> poles,
                                 std::span<const cplx> free_params, cplx c = 1.0,
                                 CountRule rule = CountRule::Multiplier);

/// Deterministic free parameters that avoid |a| in q^Z.
std::vector<cplx> default_free_params(int count, double q);

struct OrientationProbe {
  int orientation = 0;          // -1, +1, or 0 when undecided
  double residual_plus = 0.0;   // twisted-trace residual of the probe against g_{+2}
  double residual_minus = 0.0;  // against g_{-2}
  int probe_zeros = 0;
};

/// One ansatz with M + 2 zeros (multiplier rule at l = 2), tested against g_{+2} and g_{-2}.
/// orientation = -1: the multiplier rule is confirmed, and the published count N = M - 2k
/// holds for the engine twist k_e = -k. orientation = +1: it holds for k_e = k.
/// P must be self-conjugate.
OrientationProbe determine_orientation(double q, const LaurentPoly& P, double tol = 1e-8, std::uint64_t seed = 7);

struct Tolerances {
  double twisted_trace = 1e-8;
  double quasiperiodicity = 1e-9;
  double oracle_agreement = 1e-7;
  double gram = 1e-10;
  double circle = 1e-8;
  double nullspace = 1e-8;
};

struct ClassifyOptions {
  double q = 0.5;
  LaurentPoly P;
  int k = 0;
  int W = 32;
  int samples = 4096;
  int gram_size = 8;
  int trials = 100;
  std::uint64_t seed = 42;
  cplx c{1.0, 0.0};
  std::optional<std::vector<cplx>> free_zeros;
  Tolerances tol;
};

/// The positivity-oriented trace for (q, P, k): oracle-selected engine twist, zero count and
/// (when feasible) the paired ansatz, all for P as given.
struct TraceConstruction {
  AlgebraParams params;  // k = k_engine
  std::vector<cplx> poles;
  int n = 0;
  double gauge_phase = 0.0;  // arg(prod(poles)) / M; informational, nothing is rotated
  OrientationProbe probe;
  int k_engine = 0;
  CountRule rule = CountRule::Multiplier;
  ConstraintSolution constraints;
  int N_literal = 0;
  std::optional<PairedAnsatz> paired;
};

/// Validates the options (std::invalid_argument) and builds the trace. Undecided orientation
/// falls back to k_engine = -k; callers check probe.orientation.
TraceConstruction construct_trace(const ClassifyOptions& opts);

enum class Outcome { Certified, Infeasible, Inconclusive };
std::string to_string(Outcome o);

struct ClassificationReport {
  ClassifyOptions options;
  Outcome outcome = Outcome::Inconclusive;
  bool feasible = false;
  int n = 0;  // roots of P with multiplicity
  int M = 0;
  int N = 0;
  std::optional<int> cone_dim;
  int orientation = 0;
  int k_engine = 0;
  int N_literal = 0;  // count under the unflipped reading of k
  double gauge_phase = 0.0;
  std::vector<cplx> poles;
  std::vector<cplx> zeros;
  bool experimental_pairing = false;
  OrientationProbe probe;

  std::optional<ResidualReport> twisted_trace;
  std::optional<QuasiPeriodicityReport> quasiperiodicity;
  std::optional<double> oracle_agreement;  // max |c_i - c_i^LS| (unique case) or row residual
  std::string oracle_agreement_kind;
  int nullspace_dim = -1;
  int nullspace_expected = -1;
  std::optional<DecayReport> decay;
  std::optional<double> conjugate_symmetry_defect;
  std::optional<double> max_offcenter_moment;  // max_{i != 0} |c_i|
  std::vector<GramReport> gram;
  std::vector<CirclePositivityReport> circle;
  std::optional<bool> annulus_criterion;  // at k = n/2: feasible iff M = n
  std::vector<std::string> scope_notes;
  std::vector<std::string> failures;
};

/// Runs the full pipeline. Never throws on a negative result; invalid input throws std::invalid_argument.
/// Infeasible means certified: N < 0, an unattainable N = 0 product constraint, or a unique
/// (N = 0) trace whose u-sector is negative.
ClassificationReport classify(const ClassifyOptions& opts);

/// 0 certified, 3 certified infeasible, 2 inconclusive.
int exit_code(const ClassificationReport& rep);

}  // namespace qtrace
