#include "qtrace/trace_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "qtrace/parallel.hpp"

namespace qtrace {

cplx TraceAnsatz::operator()(cplx z) const {
  return theta_quotient(z, zeros, poles, l_power, c, ThetaParams::make(params.q));
}

// ---------------------------------------------------------------- MomentTable

MomentTable::MomentTable(int W, std::vector<cplx> values, bool normalized)
    : W_(W), values_(std::move(values)), normalized_(normalized) {
  if (W < 0) throw std::invalid_argument("MomentTable: W must be nonnegative");
  if (values_.size() != static_cast<std::size_t>(2 * W + 1))
    throw std::invalid_argument("MomentTable: expected 2W+1 values");
}

cplx MomentTable::at(int i) const {
  if (!contains(i)) {
    std::ostringstream os;
    os << "moment index " << i << " outside window [-" << W_ << ", " << W_ << "]";
    throw WindowTooSmall(os.str());
  }
  return values_[static_cast<std::size_t>(i + W_)];
}

cplx& MomentTable::at(int i) {
  if (!contains(i)) {
    std::ostringstream os;
    os << "moment index " << i << " outside window [-" << W_ << ", " << W_ << "]";
    throw WindowTooSmall(os.str());
  }
  return values_[static_cast<std::size_t>(i + W_)];
}

MomentTable MomentTable::normalize() const {
  const cplx c0 = at(0);
  if (std::abs(c0) == 0.0) throw std::domain_error("cannot normalize: c_0 = 0");
  std::vector<cplx> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [c0](cplx c) { return c / c0; });
  out[static_cast<std::size_t>(W_)] = 1.0;
  return MomentTable(W_, std::move(out), true);
}

MomentTable MomentTable::truncate(int W) const {
  if (W > W_) throw WindowTooSmall("truncate: requested window exceeds the table");
  std::vector<cplx> out(values_.begin() + (W_ - W), values_.begin() + (W_ + W + 1));
  return MomentTable(W, std::move(out), normalized_);
}

double MomentTable::conjugate_symmetry_defect() const {
  double d = 0.0;
  for (int i = 0; i <= W_; ++i) d = std::max(d, std::abs(at(-i) - std::conj(at(i))));
  return d;
}

BilateralSeries MomentTable::w_series() const {
  std::vector<cplx> coeffs(values_.rbegin(), values_.rend());
  return BilateralSeries(Window{-W_, W_}, std::move(coeffs), "w from moments");
}

// -------------------------------------------------------------- constraints

std::vector<cplx> poles_from_P(const AlgebraParams& params) {
  std::vector<cplx> poles;
  const auto rd = roots(params.P);
  for (const auto& r : rd.roots) {
    const double m = std::abs(r.location);
    if (m > params.q && m < 1.0 / params.q)
      for (int t = 0; t < r.multiplicity; ++t) poles.push_back(r.location / params.q);
  }
  return poles;
}

ConstraintSolution solve_constraints(const AlgebraParams& params, std::span<const cplx> poles, CountRule primary) {
  const auto theta = ThetaParams::make(params.q);
  const int l = params.l;
  ConstraintSolution sol;
  sol.M = static_cast<int>(poles.size());
  sol.l = l;
  sol.primary = primary;

  // Poles alone: w(q^2 z) = K0 z^M w(z). Each zero alpha contributes a factor -alpha / z.
  // Required: q^-l z^-l, so N = M + l and (-1)^N prod(alpha) K0 = q^-l.
  const Multiplier base = multiplier({}, poles, 0, theta);
  sol.multiplier_rule.N = base.zpow + l;
  const double sign = (sol.multiplier_rule.N % 2 == 0) ? 1.0 : -1.0;
  sol.multiplier_rule.product_target = sign * std::pow(params.q, -l) / base.constant;

  const cplx prod_beta = std::accumulate(poles.begin(), poles.end(), cplx{1.0}, std::multiplies<>());
  sol.published_rule.N = sol.M - l;
  sol.published_rule.product_target = prod_beta * std::pow(params.q, -sol.published_rule.N + sol.M);

  // A repeated root is only accurate to about sqrt(eps), and so is a product containing it.
  constexpr double kEmptyProductTol = 1e-6;
  for (ZeroCount* zc : {&sol.multiplier_rule, &sol.published_rule})
    zc->product_attainable = zc->N != 0 || std::abs(zc->product_target - 1.0) <= kEmptyProductTol;
  return sol;
}

TraceAnsatz rotate(const TraceAnsatz& ansatz, double psi) {
  TraceAnsatz out = ansatz;
  const cplx e = std::polar(1.0, -psi);
  for (auto& a : out.zeros) a *= e;
  for (auto& b : out.poles) b *= e;
  out.params.P = scale_arg(ansatz.params.P, std::polar(1.0, psi));
  return out;
}

GaugeResult gauge_normalize(const TraceAnsatz& ansatz) {
  const int M = static_cast<int>(ansatz.poles.size());
  if (M == 0) return {ansatz, 0.0};
  const cplx prod = std::accumulate(ansatz.poles.begin(), ansatz.poles.end(), cplx{1.0}, std::multiplies<>());
  const double expected = std::pow(ansatz.params.q, -M);
  if (std::abs(std::abs(prod) - expected) > 1e-8 * expected) {
    std::ostringstream os;
    os << "gauge_normalize: |prod(poles)| = " << std::abs(prod) << " but q^-M = " << expected
       << "; P is not self-conjugate or the poles are wrong";
    throw std::invalid_argument(os.str());
  }
  const double psi = std::arg(prod) / M;
  GaugeResult res{rotate(ansatz, psi), psi};
  return res;
}

// ------------------------------------------------------------------ moments

int default_sample_count(int W) {
  int s = 1;
  while (s < std::max(4096, 8 * W)) s *= 2;
  return s;
}

namespace {

double distance_to_unit_circle(cplx pole, double q) {
  // min_j | |pole| q^{2j} - 1 |
  const double lm = std::log(std::abs(pole));
  const double j = std::round(lm / (-2.0 * std::log(q)));
  double best = std::numeric_limits<double>::infinity();
  for (const double dj : {-1.0, 0.0, 1.0})
    best = std::min(best, std::abs(std::abs(pole) * std::pow(q, 2.0 * (j + dj)) - 1.0));
  return best;
}

}  // namespace

MomentTable moments(const TraceAnsatz& ansatz, int W, int samples) {
  if (W < 0) throw std::invalid_argument("moments: W must be nonnegative");
  const int S = samples == 0 ? default_sample_count(W) : samples;
  if (S < 8 * W || (S & (S - 1)) != 0)
    throw std::invalid_argument("moments: sample count must be a power of two and at least 8W");
  for (const cplx& b : ansatz.poles) {
    if (distance_to_unit_circle(b, ansatz.params.q) < 1e-6) {
      std::ostringstream os;
      os << "moments: the pole orbit of " << b << " meets the unit circle";
      throw EvaluationSingularity(os.str());
    }
  }

  const auto theta = ThetaParams::make(ansatz.params.q);
  // Twiddles at exact angles; roots[t] = e^{2 pi i t / S}.
  std::vector<cplx> roots_of_unity(static_cast<std::size_t>(S));
  for (int t = 0; t < S; ++t) roots_of_unity[static_cast<std::size_t>(t)] = std::polar(1.0, 2.0 * std::numbers::pi * t / S);

  std::vector<cplx> samples_w(static_cast<std::size_t>(S));
  parallel_for(static_cast<std::size_t>(S), [&](std::size_t s) {
    samples_w[s] = theta_quotient(roots_of_unity[s], ansatz.zeros, ansatz.poles, ansatz.l_power, ansatz.c, theta);
  });

  std::vector<cplx> c(static_cast<std::size_t>(2 * W + 1));
  parallel_for(c.size(), [&](std::size_t idx) {
    const long long i = static_cast<long long>(idx) - W;
    cplx acc{};
    for (long long s = 0; s < S; ++s) {
      const long long t = ((s * i) % S + S) % S;
      acc += samples_w[static_cast<std::size_t>(s)] * roots_of_unity[static_cast<std::size_t>(t)];
    }
    c[idx] = acc / static_cast<double>(S);
  });
  return MomentTable(W, std::move(c), false);
}

// ------------------------------------------------------------ linear system

namespace {

struct SystemRow {
  std::vector<std::pair<int, cplx>> entries;  // (moment index, coefficient), normalized to max 1
};

// Row for S = Z^j: sum_m p_m q^-(m+j) c_{m+j} - q^-l sum_m p_m q^{m+j} c_{m+j-l}.
// Coefficients are scaled in the log domain so that extreme j cannot overflow.
SystemRow trace_condition_row(const AlgebraParams& params, int j) {
  const double lq = std::log(params.q);
  std::vector<std::pair<int, double>> logs;
  std::vector<std::pair<int, cplx>> raw;
  for (const auto& [m, p] : params.P.coeffs()) {
    logs.emplace_back(m + j, -(m + j) * lq + std::log(std::abs(p)));
    logs.emplace_back(m + j - params.l, (m + j - params.l) * lq + std::log(std::abs(p)));
  }
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& e : logs) shift = std::max(shift, e.second);
  std::map<int, cplx> acc;
  for (const auto& [m, p] : params.P.coeffs()) {
    const cplx phase = p / std::abs(p);
    acc[m + j] += phase * std::exp(-(m + j) * lq + std::log(std::abs(p)) - shift);
    acc[m + j - params.l] -= phase * std::exp((m + j - params.l) * lq + std::log(std::abs(p)) - shift);
  }
  SystemRow row;
  for (const auto& [i, v] : acc) row.entries.emplace_back(i, v);
  return row;
}

int system_window(const AlgebraParams& params, int W, bool& capped) {
  constexpr int kCap = 400;
  double kappa = 0.0;
  for (const auto& r : roots(params.P).roots) {
    const double m = std::abs(r.location);
    if (m > params.q && m < 1.0 / params.q) kappa = std::max({kappa, params.q * m, params.q / m});
  }
  capped = false;
  if (kappa == 0.0) return W;
  const int need = static_cast<int>(std::ceil(std::log(1e-13) / std::log(kappa)));
  if (need > kCap) {
    capped = true;
    return std::max(W, kCap);
  }
  return std::max(W, need);
}

}  // namespace

LinearSystemResult moments_by_linear_system(const AlgebraParams& params, int W, double threshold) {
  LinearSystemResult res;
  bool capped = false;
  const int Ws = system_window(params, W, capped);
  res.system_window = Ws;
  res.window_capped = capped;
  const int cols = 2 * Ws + 1;
  const int a = params.P.min_exp();
  const int b = params.P.max_exp();
  const int reach = std::abs(params.l) + 1;

  std::vector<SystemRow> rows;
  for (int j = -Ws - b - reach; j <= Ws - a + reach; ++j) {
    SystemRow row = trace_condition_row(params, j);
    SystemRow kept;
    double mx = 0.0;
    for (const auto& [i, v] : row.entries) {
      if (i >= -Ws && i <= Ws) {
        kept.entries.emplace_back(i, v);
        mx = std::max(mx, std::abs(v));
      }
    }
    if (kept.entries.empty() || mx == 0.0) continue;
    for (auto& e : kept.entries) e.second /= mx;
    rows.push_back(std::move(kept));
  }

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [i, v] : rows[r].entries) A(static_cast<Eigen::Index>(r), i + Ws) = v;

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const int rank_slots = static_cast<int>(sv.size());
  int dim = cols - rank_slots;
  for (int t = 0; t < rank_slots; ++t)
    if (smax == 0.0 || sv(t) / smax < threshold) ++dim;
  for (int t = rank_slots - 1; t >= std::max(0, rank_slots - 6); --t)
    res.singular_values.push_back(smax > 0.0 ? sv(t) / smax : 0.0);
  res.nullspace_dim = dim;

  if (dim == 0) {
    res.diagnostic = "no decaying solution: the trace condition has a trivial nullspace";
    return res;
  }
  if (dim > rank_slots) {
    res.diagnostic = "underdetermined system";
    return res;
  }
  const Eigen::MatrixXcd V = svd.matrixV().rightCols(dim);
  const Eigen::VectorXcd v0 = V.row(Ws).transpose();
  if (v0.norm() < 1e-8) {
    res.diagnostic = "no solution with c_0 = 1";
    return res;
  }
  // Minimum-norm combination with c_0 = 1.
  const Eigen::VectorXcd y = v0.conjugate() / v0.squaredNorm();
  const Eigen::VectorXcd c = V * y;
  std::vector<cplx> vals(static_cast<std::size_t>(2 * W + 1));
  for (int i = -W; i <= W; ++i) vals[static_cast<std::size_t>(i + W)] = c(i + Ws);
  vals[static_cast<std::size_t>(W)] = 1.0;
  res.moments = MomentTable(W, std::move(vals), true);
  res.feasible = true;
  return res;
}

double linear_system_residual(const AlgebraParams& params, const MomentTable& mt) {
  const int W = mt.W();
  double scale = 0.0;
  for (const cplx& c : mt.values()) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  const int a = params.P.min_exp();
  const int b = params.P.max_exp();
  const int reach = std::abs(params.l) + 1;
  double worst = 0.0;
  for (int j = -W - b - reach; j <= W - a + reach; ++j) {
    const SystemRow row = trace_condition_row(params, j);
    bool inside = true;
    double mx = 0.0;
    for (const auto& [i, v] : row.entries) {
      inside = inside && mt.contains(i);
      mx = std::max(mx, std::abs(v));
    }
    if (!inside || mx == 0.0) continue;
    cplx acc{};
    for (const auto& [i, v] : row.entries) acc += v / mx * mt.at(i);
    worst = std::max(worst, std::abs(acc) / scale);
  }
  return worst;
}

// ------------------------------------------------------------------ oracles

cplx trace_of(const AlgebraElement& a, const MomentTable& mt) {
  const LaurentPoly r = degree_zero_part(a);
  cplx acc{};
  for (const auto& [e, coeff] : r.coeffs()) {
    if (!mt.contains(e)) {
      std::ostringstream os;
      os << "trace_of: degree-zero part reaches Z^" << e << " but the moment window is [-" << mt.W() << ", "
         << mt.W() << "]";
      throw WindowTooSmall(os.str());
    }
    acc += coeff * mt.at(e);
  }
  return acc;
}

double trace_magnitude(const AlgebraElement& a, const MomentTable& mt) {
  const LaurentPoly r = degree_zero_part(a);
  double acc = 0.0;
  for (const auto& [e, coeff] : r.coeffs()) acc += std::abs(coeff * mt.at(e));
  return acc;
}

cplx random_unit_disk(std::mt19937_64& rng) {
  const double u1 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::polar(std::sqrt(u1), 2.0 * std::numbers::pi * u2);
}

AlgebraElement random_element(std::mt19937_64& rng, int max_ladder, int max_zdeg) {
  std::map<int, LaurentPoly> terms;
  for (int m = -max_ladder; m <= max_ladder; ++m) {
    std::map<int, cplx> coeffs;
    for (int e = -max_zdeg; e <= max_zdeg; ++e) coeffs[e] = random_unit_disk(rng);
    terms[m] = LaurentPoly(std::move(coeffs));
  }
  return AlgebraElement(std::move(terms));
}

ResidualReport verify_twisted_trace(const MomentTable& mt, const AlgebraParams& params, int trials,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ResidualReport rep;
  rep.seed = seed;
  rep.samples = trials;
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto a = random_element(rng);
    const auto b = random_element(rng);
    const AlgebraElement ab = multiply(a, b, params);
    const AlgebraElement bga = multiply(b, apply_g(a, params), params);
    const cplx lhs = trace_of(ab, mt);
    const cplx rhs = trace_of(bga, mt);
    const double r = std::abs(lhs - rhs) / std::max(std::abs(lhs), 1.0);
    const double scale = std::max({trace_magnitude(ab, mt), trace_magnitude(bga, mt), std::numeric_limits<double>::min()});
    rep.max_scaled_residual = std::max(rep.max_scaled_residual, std::abs(lhs - rhs) / scale);
    rep.max_residual = std::max(rep.max_residual, r);
    sum += r;
  }
  rep.mean_residual = trials > 0 ? sum / trials : 0.0;
  return rep;
}

QuasiPeriodicityReport verify_quasiperiodicity(const TraceAnsatz& ansatz, int samples) {
  const auto theta = ThetaParams::make(ansatz.params.q);
  const double q = ansatz.params.q;
  const int l = ansatz.params.l;
  auto w = [&](cplx z) { return theta_quotient(z, ansatz.zeros, ansatz.poles, ansatz.l_power, ansatz.c, theta); };
  auto rel = [](cplx x, cplx y) {
    const double d = std::max({std::abs(x), std::abs(y), std::numeric_limits<double>::min()});
    return std::abs(x - y) / d;
  };

  QuasiPeriodicityReport rep;
  for (const double radius : {1.0, std::sqrt(q), 1.0 / std::sqrt(q)}) {
    for (int s = 0; s < samples; ++s) {
      // Offset by half a step so the real axis (where test poles often sit) is avoided.
      const cplx z = std::polar(radius, 2.0 * std::numbers::pi * (s + 0.5) / samples);
      cplx lhs, wq;
      try {
        lhs = w(z / q);
        wq = w(q * z);
      } catch (const EvaluationSingularity&) {
        ++rep.skipped;
        continue;
      }
      ++rep.samples;
      const cplx zl = std::pow(z, l);
      const cplx Pz = ansatz.params.P(z);
      rep.max_residual = std::max(rep.max_residual, rel(lhs, zl * wq));
      rep.with_P_residual = std::max(rep.with_P_residual, rel(Pz * lhs, Pz * zl * wq));
      rep.published_form_residual =
          std::max(rep.published_form_residual, rel(lhs, std::pow(q, l) * zl * wq));
    }
  }
  return rep;
}

DecayReport decay_fit(const MomentTable& mt) {
  const int W = mt.W();
  if (W < 16) throw std::invalid_argument("decay_fit: window W must be at least 16");
  double scale = std::abs(mt.at(0));
  if (scale == 0.0)
    for (const cplx& c : mt.values()) scale = std::max(scale, std::abs(c));

  DecayReport rep;
  double worst_rms = 0.0;
  for (const int side : {+1, -1}) {
    std::vector<double> xs, ys;
    for (int n = W / 2; n <= W; ++n) {
      const double m = std::abs(mt.at(side * n));
      if (m > 1e-13 * scale) {
        xs.push_back(n);
        ys.push_back(std::log(m));
      }
    }
    double kappa = 0.0;
    int best_a = 0;
    double best_rms = 0.0;
    if (xs.size() < 3) {
      rep.note += (side > 0 ? "positive" : "negative");
      rep.note += " tail below noise floor; kappa reported as 0. ";
    } else {
      best_rms = std::numeric_limits<double>::infinity();
      for (int a = 0; a <= 3; ++a) {
        // y - a log N = s N + b
        const std::size_t n = xs.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::vector<double> y(n);
        for (std::size_t t = 0; t < n; ++t) {
          y[t] = ys[t] - a * std::log(xs[t]);
          sx += xs[t];
          sy += y[t];
          sxx += xs[t] * xs[t];
          sxy += xs[t] * y[t];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double icpt = (sy - slope * sx) / n;
        double ss = 0;
        for (std::size_t t = 0; t < n; ++t) ss += std::pow(y[t] - slope * xs[t] - icpt, 2);
        const double rms = std::sqrt(ss / n);
        if (rms < best_rms - 1e-12) {
          best_rms = rms;
          best_a = a;
          kappa = std::exp(slope);
        }
      }
    }
    worst_rms = std::max(worst_rms, best_rms);
    if (side > 0) {
      rep.kappa_plus = kappa;
      rep.poly_exp_a = best_a;
    } else {
      rep.kappa_minus = kappa;
      rep.poly_exp_b = best_a;
    }
  }
  rep.fit_residual = worst_rms;
  rep.decay_ok = rep.kappa_plus < 1.0 && rep.kappa_minus < 1.0;
  if (!rep.decay_ok) rep.note += "moments do not decay (kappa >= 1).";
  return rep;
}

}  // namespace qtrace
