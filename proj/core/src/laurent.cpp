#include "qtrace/laurent.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qtrace {

Window intersect(const Window& a, const Window& b) {
  return Window{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// ---------------------------------------------------------------- LaurentPoly

LaurentPoly::LaurentPoly(std::map<int, cplx> coeffs) : coeffs_(std::move(coeffs)) {
  canonicalize();
}

LaurentPoly LaurentPoly::constant(cplx c) { return monomial(0, c); }

LaurentPoly LaurentPoly::monomial(int exponent, cplx c) {
  return LaurentPoly(std::map<int, cplx>{{exponent, c}});
}

void LaurentPoly::canonicalize() {
  double m = 0.0;
  for (const auto& [e, c] : coeffs_) m = std::max(m, std::abs(c));
  if (m == 0.0 || !std::isfinite(m)) {
    if (!std::isfinite(m)) throw std::invalid_argument("LaurentPoly: non-finite coefficient");
    coeffs_.clear();
    return;
  }
  const double cut = kPruneRelative * m;
  std::erase_if(coeffs_, [cut](const auto& kv) { return std::abs(kv.second) < cut; });
}

cplx LaurentPoly::coeff(int exponent) const {
  auto it = coeffs_.find(exponent);
  return it == coeffs_.end() ? cplx{} : it->second;
}

int LaurentPoly::min_exp() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
int LaurentPoly::max_exp() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

double LaurentPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [e, c] : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

cplx LaurentPoly::operator()(cplx z) const {
  if (coeffs_.empty()) return {};
  // Horner on the ordinary polynomial z^{-min} p, then rescale.
  cplx acc{};
  int prev = max_exp();
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= std::pow(z, prev - it->first);
    acc += it->second;
    prev = it->first;
  }
  acc *= std::pow(z, prev);
  return acc;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& other) {
  for (const auto& [e, c] : other.coeffs_) coeffs_[e] += c;
  canonicalize();
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& other) {
  for (const auto& [e, c] : other.coeffs_) coeffs_[e] -= c;
  canonicalize();
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(cplx s) {
  for (auto& [e, c] : coeffs_) c *= s;
  canonicalize();
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  std::map<int, cplx> out;
  for (const auto& [ea, ca] : a.coeffs_)
    for (const auto& [eb, cb] : b.coeffs_) out[ea + eb] += ca * cb;
  return LaurentPoly(std::move(out));
}

double max_abs_diff(const LaurentPoly& a, const LaurentPoly& b) {
  double m = 0.0;
  for (const auto& [e, c] : a.coeffs()) m = std::max(m, std::abs(c - b.coeff(e)));
  for (const auto& [e, c] : b.coeffs())
    if (!a.coeffs().contains(e)) m = std::max(m, std::abs(c));
  return m;
}

// ------------------------------------------------------------ BilateralSeries

BilateralSeries::BilateralSeries(Window window, std::vector<cplx> coeffs, std::string note)
    : window_(window), coeffs_(std::move(coeffs)), note_(std::move(note)) {
  if (window_.lo > 0 || window_.hi < 0)
    throw std::invalid_argument("BilateralSeries: window must satisfy lo <= 0 <= hi");
  if (static_cast<int>(coeffs_.size()) != window_.size())
    throw std::invalid_argument("BilateralSeries: coefficient count does not match window");
}

BilateralSeries BilateralSeries::zeros(Window window, std::string note) {
  return BilateralSeries(window, std::vector<cplx>(static_cast<size_t>(window.size())),
                         std::move(note));
}

BilateralSeries BilateralSeries::from_poly(const LaurentPoly& p, Window window) {
  auto s = zeros(window, "poly");
  for (const auto& [e, c] : p.coeffs())
    if (window.contains(e)) s.at(e) = c;
  return s;
}

cplx BilateralSeries::operator[](int exponent) const {
  if (!window_.contains(exponent)) return {};
  return coeffs_[static_cast<size_t>(exponent - window_.lo)];
}

cplx& BilateralSeries::at(int exponent) {
  if (!window_.contains(exponent)) throw std::out_of_range("BilateralSeries: exponent outside window");
  return coeffs_[static_cast<size_t>(exponent - window_.lo)];
}

double BilateralSeries::max_abs() const { return max_abs(window_); }

double BilateralSeries::max_abs(const Window& sub) const {
  const Window w = intersect(sub, window_);
  double m = 0.0;
  for (int i = w.lo; i <= w.hi; ++i) m = std::max(m, std::abs((*this)[i]));
  return m;
}

namespace {

std::string window_tag(const Window& w) {
  std::ostringstream os;
  os << "[" << w.lo << "," << w.hi << "]";
  return os.str();
}

BilateralSeries combine(const BilateralSeries& a, const BilateralSeries& b, double sign) {
  const Window w = intersect(a.window(), b.window());
  auto out = BilateralSeries::zeros(w, (sign > 0 ? "sum on " : "difference on ") + window_tag(w));
  for (int i = w.lo; i <= w.hi; ++i) out.at(i) = a[i] + sign * b[i];
  return out;
}

}  // namespace

BilateralSeries operator+(const BilateralSeries& a, const BilateralSeries& b) {
  return combine(a, b, 1.0);
}

BilateralSeries operator-(const BilateralSeries& a, const BilateralSeries& b) {
  return combine(a, b, -1.0);
}

BilateralSeries multiply(const LaurentPoly& p, const BilateralSeries& s) {
  const Window w = s.window();
  auto out = BilateralSeries::zeros(w, "P*(" + s.note() + ")");
  for (int e = w.lo; e <= w.hi; ++e) {
    cplx acc{};
    for (const auto& [m, c] : p.coeffs()) acc += c * s[e - m];
    out.at(e) = acc;
  }
  return out;
}

Window interior(const Window& w, const LaurentPoly& p) {
  if (p.is_zero()) return w;
  return Window{w.lo + std::max(0, p.max_exp()), w.hi + std::min(0, p.min_exp())};
}

// ------------------------------------------------------------------ basic ops

cplx ct(const LaurentPoly& p) { return p.coeff(0); }
cplx ct(const BilateralSeries& s) { return s[0]; }

LaurentPoly scale_arg(const LaurentPoly& p, cplx c) {
  if (c == cplx{}) throw std::invalid_argument("scale_arg: scale must be nonzero");
  std::map<int, cplx> out;
  for (const auto& [e, v] : p.coeffs()) out[e] = e == 0 ? v : v * std::pow(c, e);
  return LaurentPoly(std::move(out));
}

BilateralSeries scale_arg(const BilateralSeries& s, cplx c) {
  if (c == cplx{}) throw std::invalid_argument("scale_arg: scale must be nonzero");
  auto out = s;
  const Window w = s.window();
  for (int e = w.lo; e <= w.hi; ++e)
    if (e != 0) out.at(e) *= std::pow(c, e);
  return BilateralSeries(w, out.coeffs(), "scaled(" + s.note() + ")");
}

LaurentPoly conj_invol(const LaurentPoly& p) {
  std::map<int, cplx> out;
  for (const auto& [e, c] : p.coeffs()) out[-e] = std::conj(c);
  return LaurentPoly(std::move(out));
}

bool is_self_conjugate(const LaurentPoly& p, double tol) {
  const double scale = std::max(1.0, p.max_abs_coeff());
  return max_abs_diff(conj_invol(p), p) <= tol * scale;
}

// ---------------------------------------------------------------------- roots

int RootData::count() const {
  return std::accumulate(roots.begin(), roots.end(), 0,
                         [](int acc, const Root& r) { return acc + r.multiplicity; });
}

cplx RootData::evaluate(cplx z) const {
  cplx v = leading_coeff * std::pow(z, leading_exponent);
  for (const auto& r : roots) v *= std::pow(z - r.location, r.multiplicity);
  return v;
}

namespace {

// Parlett-Reinsch diagonal balancing with radix 2 (scales are exact).
void balance(Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  constexpr double radix = 2.0;
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c >= g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

cplx horner(const std::vector<cplx>& a, cplx z) {
  cplx v{};
  for (auto it = a.rbegin(); it != a.rend(); ++it) v = v * z + *it;
  return v;
}

cplx horner_derivative(const std::vector<cplx>& a, cplx z) {
  cplx v{};
  for (size_t j = a.size() - 1; j >= 1; --j) v = v * z + static_cast<double>(j) * a[j];
  return v;
}

}  // namespace

RootData roots(const LaurentPoly& p, std::optional<double> cluster_tol) {
  if (p.is_zero()) throw std::invalid_argument("roots: zero polynomial");
  const int lo = p.min_exp();
  const int n = p.spread();
  std::vector<cplx> a(static_cast<size_t>(n + 1));
  for (int j = 0; j <= n; ++j) a[static_cast<size_t>(j)] = p.coeff(lo + j);

  RootData rd;
  rd.leading_exponent = lo;
  rd.leading_coeff = a.back();
  if (n == 0) return rd;

  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) comp(0, j) = -a[static_cast<size_t>(n - 1 - j)] / a.back();
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  balance(comp);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("roots: eigenvalue iteration failed");

  std::vector<cplx> raw(solver.eigenvalues().begin(), solver.eigenvalues().end());
  for (auto& z : raw) {
    for (int it = 0; it < 3; ++it) {
      const cplx d = horner_derivative(a, z);
      if (d == cplx{}) break;
      const cplx next = z - horner(a, z) / d;
      if (!(std::abs(horner(a, next)) < std::abs(horner(a, z)))) break;
      z = next;
    }
  }

  double max_mod = 0.0;
  for (const auto& z : raw) max_mod = std::max(max_mod, std::abs(z));
  const double tol = cluster_tol.value_or(1e-7 * max_mod);

  // Single-linkage clustering.
  std::vector<int> parent(raw.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[static_cast<size_t>(i)] != i) i = parent[static_cast<size_t>(i)];
    return i;
  };
  for (size_t i = 0; i < raw.size(); ++i)
    for (size_t j = i + 1; j < raw.size(); ++j)
      if (std::abs(raw[i] - raw[j]) <= tol)
        parent[static_cast<size_t>(find(static_cast<int>(j)))] = find(static_cast<int>(i));

  std::map<int, std::pair<cplx, int>> clusters;
  for (size_t i = 0; i < raw.size(); ++i) {
    auto& [sum, count] = clusters[find(static_cast<int>(i))];
    sum += raw[i];
    ++count;
  }
  for (const auto& [id, sc] : clusters)
    rd.roots.push_back(Root{sc.first / static_cast<double>(sc.second), sc.second});
  std::sort(rd.roots.begin(), rd.roots.end(), [](const Root& x, const Root& y) {
    if (std::abs(x.location) != std::abs(y.location)) return std::abs(x.location) < std::abs(y.location);
    return std::arg(x.location) < std::arg(y.location);
  });
  return rd;
}

// ------------------------------------------------------------------- inverses

namespace {

// Power-series reciprocal b of a_0 + a_1 t + ... up to `count` terms.
std::vector<cplx> series_reciprocal(const std::vector<cplx>& a, int count) {
  std::vector<cplx> b(static_cast<size_t>(std::max(count, 0)));
  if (b.empty()) return b;
  b[0] = 1.0 / a[0];
  for (size_t k = 1; k < b.size(); ++k) {
    cplx acc{};
    for (size_t j = 1; j < a.size() && j <= k; ++j) acc += a[j] * b[k - j];
    b[k] = -acc / a[0];
  }
  return b;
}

// Coefficients of p read upwards from min_exp (right) or downwards from max_exp (left).
std::vector<cplx> upward(const LaurentPoly& p) {
  std::vector<cplx> a;
  for (int e = p.min_exp(); e <= p.max_exp(); ++e) a.push_back(p.coeff(e));
  return a;
}

std::vector<cplx> downward(const LaurentPoly& p) {
  std::vector<cplx> a;
  for (int e = p.max_exp(); e >= p.min_exp(); --e) a.push_back(p.coeff(e));
  return a;
}

}  // namespace

BilateralSeries right_inverse(const LaurentPoly& p, Window window) {
  if (p.is_zero()) throw std::invalid_argument("right_inverse: zero polynomial");
  const int start = -p.min_exp();
  auto out = BilateralSeries::zeros(window, "P_r^-1");
  if (window.hi < start) return out;
  const auto b = series_reciprocal(upward(p), window.hi - start + 1);
  for (int e = std::max(window.lo, start); e <= window.hi; ++e)
    out.at(e) = b[static_cast<size_t>(e - start)];
  return out;
}

BilateralSeries left_inverse(const LaurentPoly& p, Window window) {
  if (p.is_zero()) throw std::invalid_argument("left_inverse: zero polynomial");
  const int start = -p.max_exp();
  auto out = BilateralSeries::zeros(window, "P_l^-1");
  if (window.lo > start) return out;
  const auto b = series_reciprocal(downward(p), start - window.lo + 1);
  for (int e = std::min(window.hi, start); e >= window.lo; --e)
    out.at(e) = b[static_cast<size_t>(start - e)];
  return out;
}

std::vector<BilateralSeries> kernel_basis(const RootData& rd, Window window) {
  std::vector<BilateralSeries> basis;
  for (const auto& root : rd.roots) {
    if (root.location == cplx{}) throw std::invalid_argument("kernel_basis: root at zero");
    const cplx inv = 1.0 / root.location;
    for (int i = 0; i < root.multiplicity; ++i) {
      std::ostringstream note;
      note << "kernel f_{" << i << "} at root " << root.location;
      auto f = BilateralSeries::zeros(window, note.str());
      for (int l = window.lo; l <= window.hi; ++l) {
        double falling = 1.0;
        for (int t = 0; t < i; ++t) falling *= static_cast<double>(l - t);
        f.at(l) = falling * std::pow(inv, l);
      }
      basis.push_back(std::move(f));
    }
  }
  return basis;
}

BilateralSeries solve_division(const BilateralSeries& target, const LaurentPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("solve_division: zero polynomial");
  const Window w = target.window();
  const int span = w.size() + p.spread() + 1;
  const auto right = series_reciprocal(upward(p), span);   // exponent -min_exp + n
  const auto left = series_reciprocal(downward(p), span);  // exponent -max_exp - n

  auto out = BilateralSeries::zeros(w, "target/P (split)");
  for (int e = w.lo; e <= w.hi; ++e) {
    cplx acc{};
    for (int i = 0; i <= w.hi; ++i) {
      const int n = e - i + p.min_exp();
      if (n >= 0 && n < span) acc += target[i] * right[static_cast<size_t>(n)];
    }
    for (int i = w.lo; i < 0; ++i) {
      const int n = i - e - p.max_exp();
      if (n >= 0 && n < span) acc += target[i] * left[static_cast<size_t>(n)];
    }
    out.at(e) = acc;
  }
  return out;
}

}  // namespace qtrace
