#include "qtrace_cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qtrace/json_io.hpp"
#include "qtrace_cli/config.hpp"

namespace qtrace::cli {

namespace {

// Writes `text` to args.out_path when given, else to `out`.
bool emit(const std::string& text, const CommandArgs& args, std::ostream& out, std::ostream& err) {
  if (!args.out_path) {
    out << text;
    return true;
  }
  std::ofstream f(*args.out_path, std::ios::binary | std::ios::trunc);
  if (!f) {
    err << "error: cannot write " << *args.out_path << "\n";
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string fmt(double d) {
  if (std::isnan(d)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

ClassifyOptions load_options(const CommandArgs& args) {
  ClassifyOptions o = load_config(args.config_path).options;
  if (args.seed) o.seed = *args.seed;
  if (args.trials) {
    if (*args.trials < 1) throw std::invalid_argument("--trials must be at least 1");
    o.trials = *args.trials;
  }
  return o;
}

// Runs `body`; any exception is an input error (exit 1).
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kInputError;
}

// The feasible ansatz, or nullopt after reporting infeasibility on `err`.
std::optional<TraceConstruction> feasible_trace(const ClassifyOptions& o, std::ostream& err) {
  TraceConstruction tc = construct_trace(o);
  if (!tc.paired) {
    err << "infeasible: zero count N = " << tc.constraints.N() << " < 0 (M = " << tc.poles.size()
        << ", k = " << o.k << ")\n";
    return std::nullopt;
  }
  return tc;
}

}  // namespace

int cmd_classify(const CommandArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ClassificationReport rep = classify(load_options(args));
    if (!emit(dump_deterministic(to_json(rep)), args, out, err)) return static_cast<int>(kInputError);
    for (const auto& f : rep.failures) err << "failure: " << f << "\n";
    return exit_code(rep);
  });
}

int cmd_moments(const CommandArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ClassifyOptions o = load_options(args);
    const int max_index = args.max_index.value_or(o.W);
    if (max_index < 0 || max_index > o.W)
      throw std::invalid_argument("--max-index must lie in [0, W]");
    const auto tc = feasible_trace(o, err);
    if (!tc) return static_cast<int>(kInfeasible);
    const MomentTable mt = moments(tc->paired->ansatz, o.W, o.samples);

    std::string text;
    if (args.out_path && ends_with(*args.out_path, ".json")) {
      text = dump_deterministic(to_json(mt.truncate(max_index)));
    } else {
      std::ostringstream os;
      os << "i,re,im,abs\n";
      for (int i = -max_index; i <= max_index; ++i) {
        const cplx c = mt.at(i);
        os << i << "," << fmt(c.real()) << "," << fmt(c.imag()) << "," << fmt(std::abs(c)) << "\n";
      }
      text = os.str();
    }
    return emit(text, args, out, err) ? static_cast<int>(kOk) : static_cast<int>(kInputError);
  });
}

int cmd_verify(const CommandArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ClassifyOptions o = load_options(args);
    const auto tc = feasible_trace(o, err);
    if (!tc) return static_cast<int>(kInfeasible);
    const TraceAnsatz& ansatz = tc->paired->ansatz;
    const MomentTable mt = moments(ansatz, o.W, o.samples).normalize();

    std::vector<std::string> failures;
    const ResidualReport tt = verify_twisted_trace(mt, tc->params, o.trials, o.seed);
    if (tt.max_scaled_residual > o.tol.twisted_trace) failures.push_back("twisted-trace residual above tolerance");
    const QuasiPeriodicityReport qp = verify_quasiperiodicity(ansatz, 256);
    if (qp.max_residual > o.tol.quasiperiodicity) failures.push_back("quasi-periodicity residual above tolerance");

    const LinearSystemResult ls = moments_by_linear_system(tc->params, o.W, o.tol.nullspace);
    json oracle{{"nullspace_dim", ls.nullspace_dim}, {"system_window", ls.system_window}};
    double agreement = 0.0;
    if (ls.feasible && ls.nullspace_dim == 1) {
      for (int i = -std::min(8, o.W); i <= std::min(8, o.W); ++i)
        agreement = std::max(agreement, std::abs(mt.at(i) - ls.moments.at(i)));
      oracle["kind"] = "max |c_i - c_i(linear system)|, |i| <= 8";
    } else {
      agreement = linear_system_residual(tc->params, mt);
      oracle["kind"] = "max trace-condition row residual";
    }
    oracle["value"] = agreement;
    if (agreement > o.tol.oracle_agreement) failures.push_back("theta and linear-system oracles disagree");

    const json report{{"twisted_trace", to_json(tt)},
                      {"quasiperiodicity", to_json(qp)},
                      {"oracle_agreement", oracle},
                      {"k_engine", tc->k_engine},
                      {"N", tc->constraints.N()},
                      {"tolerances", to_json(o.tol)},
                      {"trials", o.trials},
                      {"seed", o.seed},
                      {"pass", failures.empty()},
                      {"failures", failures}};
    if (!emit(dump_deterministic(report), args, out, err)) return static_cast<int>(kInputError);
    for (const auto& f : failures) err << "failure: " << f << "\n";
    return failures.empty() ? static_cast<int>(kOk) : static_cast<int>(kInconclusive);
  });
}

int cmd_emit_circle(const CommandArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.function != "w" && args.function != "wP")
      throw std::invalid_argument("--function must be 'w' or 'wP'");
    const ClassifyOptions o = load_options(args);
    const auto tc = feasible_trace(o, err);
    if (!tc) return static_cast<int>(kInfeasible);
    const TraceAnsatz& ansatz = tc->paired->ansatz;
    const bool density = args.function == "wP";

    std::ostringstream os;
    os << "phi,re,im\n";
    int singular = 0;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int s = 0; s < o.samples; ++s) {
      const double phi = 2.0 * std::numbers::pi * s / o.samples;
      const cplx z = std::polar(1.0, phi);
      cplx f{nan, nan};
      try {
        f = density ? u_sector_density(ansatz, z) : ansatz(z);
      } catch (const EvaluationSingularity&) {
        ++singular;
      }
      os << fmt(phi) << "," << fmt(f.real()) << "," << fmt(f.imag()) << "\n";
    }
    if (singular > 0) err << "warning: " << singular << " of " << o.samples << " samples hit a pole orbit (NaN rows)\n";
    return emit(os.str(), args, out, err) ? static_cast<int>(kOk) : static_cast<int>(kInputError);
  });
}

}  // namespace qtrace::cli
