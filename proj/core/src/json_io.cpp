#include "qtrace/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qtrace {

json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw std::invalid_argument("expected a complex number as [re, im] or a real number, got " + j.dump());
}

json to_json(const LaurentPoly& p) {
  json out = json::object();
  for (const auto& [e, c] : p.coeffs()) out[std::to_string(e)] = to_json(c);
  return out;
}

namespace {

int parse_exponent(const std::string& key) {
  std::size_t pos = 0;
  int e = 0;
  try {
    e = std::stoi(key, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != key.size() || key.empty()) throw std::invalid_argument("exponent key '" + key + "' is not an integer");
  return e;
}

}  // namespace

LaurentPoly poly_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("a Laurent polynomial must be a JSON object");
  if (j.contains("roots")) {
    for (const auto& [key, value] : j.items())
      if (key != "roots" && key != "leading" && key != "min_exp")
        throw std::invalid_argument("unknown key '" + key + "' in root-form polynomial");
    if (!j["roots"].is_array()) throw std::invalid_argument("'roots' must be an array");
    const cplx leading = j.contains("leading") ? complex_from_json(j["leading"]) : cplx{1.0};
    const int min_exp = j.contains("min_exp") ? j["min_exp"].get<int>() : 0;
    LaurentPoly p = LaurentPoly::monomial(min_exp, leading);
    for (const auto& r : j["roots"]) {
      const cplx root = complex_from_json(r);
      p = p * LaurentPoly(std::map<int, cplx>{{0, -root}, {1, 1.0}});
    }
    return p;
  }
  std::map<int, cplx> coeffs;
  for (const auto& [key, value] : j.items()) coeffs[parse_exponent(key)] += complex_from_json(value);
  return LaurentPoly(std::move(coeffs));
}

json to_json(const AlgebraElement& a) {
  json terms = json::object();
  for (const auto& [m, r] : a.terms()) terms[std::to_string(m)] = to_json(r);
  return json{{"terms", terms}};
}

AlgebraElement element_from_json(const json& j) {
  if (!j.is_object() || !j.contains("terms")) throw std::invalid_argument("algebra element needs a 'terms' object");
  std::map<int, LaurentPoly> terms;
  for (const auto& [key, value] : j["terms"].items()) terms[parse_exponent(key)] += poly_from_json(value);
  return AlgebraElement(std::move(terms));
}

json to_json(const MomentTable& mt) {
  json c = json::object();
  for (int i = -mt.W(); i <= mt.W(); ++i) c[std::to_string(i)] = to_json(mt.at(i));
  return json{{"W", mt.W()}, {"normalized", mt.normalized()}, {"c", c}};
}

MomentTable moments_from_json(const json& j) {
  const int W = j.at("W").get<int>();
  std::vector<cplx> values(static_cast<std::size_t>(2 * W + 1));
  for (const auto& [key, value] : j.at("c").items()) {
    const int i = parse_exponent(key);
    if (i < -W || i > W) throw std::invalid_argument("moment index " + key + " outside the window");
    values[static_cast<std::size_t>(i + W)] = complex_from_json(value);
  }
  return MomentTable(W, std::move(values), j.value("normalized", false));
}

json to_json(const ResidualReport& r) {
  return json{{"max_residual", r.max_residual}, {"mean_residual", r.mean_residual},
              {"max_scaled_residual", r.max_scaled_residual}, {"samples", r.samples},
              {"seed", r.seed}};
}

json to_json(const QuasiPeriodicityReport& r) {
  return json{{"max_residual", r.max_residual},
              {"with_P_residual", r.with_P_residual},
              {"published_form_residual", r.published_form_residual},
              {"samples", r.samples},
              {"skipped", r.skipped}};
}

json to_json(const DecayReport& r) {
  return json{{"kappa_plus", r.kappa_plus}, {"kappa_minus", r.kappa_minus}, {"poly_exp_a", r.poly_exp_a},
              {"poly_exp_b", r.poly_exp_b}, {"fit_residual", r.fit_residual}, {"decay_ok", r.decay_ok},
              {"note", r.note}};
}

json to_json(const GramReport& r) {
  return json{{"basis", r.basis},
              {"m", r.m},
              {"size", 2 * r.m + 1},
              {"min_eigenvalue", r.min_eigenvalue},
              {"min_pivot", r.min_pivot},
              {"hermitian_defect", r.hermitian_defect},
              {"tolerance", r.tolerance},
              {"positive_definite", r.positive_definite},
              {"verdict", to_string(r.verdict)}};
}

json to_json(const CirclePositivityReport& r) {
  return json{{"function", r.function}, {"min_value", r.min_value}, {"max_imag", r.max_imag},
              {"samples", r.samples},   {"tolerance", r.tolerance}, {"positive", r.positive}};
}

json to_json(const OrientationProbe& r) {
  return json{{"orientation", r.orientation},
              {"residual_plus", r.residual_plus},
              {"residual_minus", r.residual_minus},
              {"probe_zeros", r.probe_zeros}};
}

json to_json(const Tolerances& t) {
  return json{{"twisted_trace", t.twisted_trace},       {"quasiperiodicity", t.quasiperiodicity},
              {"oracle_agreement", t.oracle_agreement}, {"gram", t.gram},
              {"circle", t.circle},                     {"nullspace", t.nullspace}};
}

json to_json(const ClassificationReport& r) {
  const auto& o = r.options;
  json config{{"q", o.q},          {"P", to_json(o.P)},       {"k", o.k},
              {"W", o.W},          {"samples", o.samples},    {"gram_size", o.gram_size},
              {"trials", o.trials}, {"seed", o.seed},         {"c", to_json(o.c)},
              {"tolerances", to_json(o.tol)}};
  if (o.free_zeros) {
    json fz = json::array();
    for (const cplx& a : *o.free_zeros) fz.push_back(to_json(a));
    config["free_zeros"] = fz;
  }

  json residuals = json::object();
  if (r.twisted_trace) residuals["twisted_trace"] = to_json(*r.twisted_trace);
  if (r.quasiperiodicity) residuals["quasiperiodicity"] = to_json(*r.quasiperiodicity);
  if (r.oracle_agreement)
    residuals["oracle_agreement"] = json{{"value", *r.oracle_agreement}, {"kind", r.oracle_agreement_kind}};
  if (r.conjugate_symmetry_defect) residuals["conjugate_symmetry_defect"] = *r.conjugate_symmetry_defect;
  residuals["nullspace"] = json{{"dim", r.nullspace_dim}, {"expected", r.nullspace_expected}};
  if (r.decay) residuals["decay"] = to_json(*r.decay);

  json gram = json::array();
  for (const auto& g : r.gram) gram.push_back(to_json(g));
  json circle = json::array();
  for (const auto& c : r.circle) circle.push_back(to_json(c));
  json poles = json::array();
  for (const cplx& b : r.poles) poles.push_back(to_json(b));
  json zeros = json::array();
  for (const cplx& a : r.zeros) zeros.push_back(to_json(a));

  json out{{"outcome", to_string(r.outcome)},
           {"feasible", r.feasible},
           {"n", r.n},
           {"M", r.M},
           {"N", r.N},
           {"N_literal", r.N_literal},
           {"cone_dim", r.cone_dim ? json(*r.cone_dim) : json(nullptr)},
           {"orientation", r.orientation},
           {"k", o.k},
           {"k_engine", r.k_engine},
           {"gauge_phase", r.gauge_phase},
           {"poles", poles},
           {"zeros", zeros},
           {"experimental_pairing", r.experimental_pairing},
           {"probe", to_json(r.probe)},
           {"residuals", residuals},
           {"gram", gram},
           {"circle", circle},
           {"annulus_criterion", r.annulus_criterion ? json(*r.annulus_criterion) : json(nullptr)},
           {"scope_notes", r.scope_notes},
           {"failures", r.failures},
           {"config", config}};
  if (r.max_offcenter_moment)
    out["moment_bound"] = json{{"max_offcenter", *r.max_offcenter_moment}, {"margin", 1.0 - *r.max_offcenter_moment}};
  return out;
}

// ------------------------------------------------------------------ dumping

namespace {

void write_number(std::ostream& os, const json& j) {
  if (j.is_number_integer() || j.is_number_unsigned()) {
    os << j.dump();
    return;
  }
  const double d = j.get<double>();
  if (!std::isfinite(d)) {
    os << "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  os << s;
}

void write(std::ostream& os, const json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // nlohmann::json keeps keys sorted
        if (!first) os << "," << nl;
        first = false;
        os << pad << json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write(os, it.value(), indent, depth + 1);
      }
      os << nl << close_pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Short numeric arrays (complex pairs) stay on one line.
      const bool inline_array = j.size() <= 2 && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_number(); });
      if (inline_array) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_number(os, j[i]);
        }
        os << "]";
        return;
      }
      os << "[" << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << "," << nl;
        os << pad;
        write(os, j[i], indent, depth + 1);
      }
      os << nl << close_pad << "]";
      return;
    }
    case json::value_t::number_float:
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
      write_number(os, j);
      return;
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump_deterministic(const json& j, int indent) {
  std::ostringstream os;
  write(os, j, indent, 0);
  os << "\n";
  return os.str();
}

}  // namespace qtrace
