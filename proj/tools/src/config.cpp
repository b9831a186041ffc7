#include "qtrace_cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qtrace/json_io.hpp"

namespace qtrace::cli {

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

namespace {

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of the first occurrence of "key": in the text, or 1 if absent.
int line_of_key(const std::string& text, const std::string& key) {
  const std::string needle = "\"" + key + "\"";
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    std::size_t after = pos + needle.size();
    while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
    if (after < text.size() && text[after] == ':') return line_of_offset(text, pos);
    pos = after;
  }
  return 1;
}

int require_int(const json& j, const std::string& key, const std::string& text, const std::string& source) {
  if (!j.is_number_integer()) throw ConfigError(source, line_of_key(text, key), key + " must be an integer");
  return j.get<int>();
}

}  // namespace

ProblemConfig parse_config(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source, line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON");
  }
  if (!j.is_object()) throw ConfigError(source, 1, "the config must be a JSON object");

  static const std::set<std::string> known = {"q",    "P", "k", "W", "samples", "gram_size", "tolerances",
                                              "seed", "c", "free_zeros", "trials"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ConfigError(source, line_of_key(text, key), "unknown key '" + key + "'");
  auto at = [&](const std::string& key) { return line_of_key(text, key); };

  ProblemConfig cfg;
  ClassifyOptions& o = cfg.options;

  if (!j.contains("q")) throw ConfigError(source, 1, "missing required key 'q'");
  if (!j["q"].is_number()) throw ConfigError(source, at("q"), "q must be a number");
  o.q = j["q"].get<double>();
  if (!(o.q > 0.0 && o.q < 1.0)) throw ConfigError(source, at("q"), "q must lie in (0,1)");
  if (o.q >= 0.9) throw ConfigError(source, at("q"), "q must be below 0.9 for the theta product expansion");

  if (!j.contains("P")) throw ConfigError(source, 1, "missing required key 'P'");
  try {
    o.P = poly_from_json(j["P"]);
  } catch (const std::exception& e) {
    throw ConfigError(source, at("P"), std::string("invalid P: ") + e.what());
  }
  if (o.P.is_zero()) throw ConfigError(source, at("P"), "P must be nonzero");
  if (!is_self_conjugate(o.P))
    throw ConfigError(source, at("P"), "P must be self-conjugate, P(z) = conj(P)(1/z), for the conjugation to exist");

  if (!j.contains("k")) throw ConfigError(source, 1, "missing required key 'k'");
  o.k = require_int(j["k"], "k", text, source);

  if (j.contains("W")) o.W = require_int(j["W"], "W", text, source);
  if (o.W < 8) throw ConfigError(source, at("W"), "W must be at least 8");
  if (j.contains("samples")) o.samples = require_int(j["samples"], "samples", text, source);
  if (o.samples < 8 * o.W || (o.samples & (o.samples - 1)) != 0)
    throw ConfigError(source, at("samples"), "samples must be a power of two and at least 8W");
  if (j.contains("gram_size")) o.gram_size = require_int(j["gram_size"], "gram_size", text, source);
  if (o.gram_size < 1) throw ConfigError(source, at("gram_size"), "gram_size must be at least 1");
  const int need = 2 * o.gram_size + o.P.spread() + std::abs(o.k);
  if (o.W < need)
    throw ConfigError(source, at("W"), "W must be at least 2*gram_size + spread(P) + |k| = " + std::to_string(need));
  if (j.contains("trials")) o.trials = require_int(j["trials"], "trials", text, source);
  if (o.trials < 1) throw ConfigError(source, at("trials"), "trials must be at least 1");

  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0)
      throw ConfigError(source, at("seed"), "seed must be a nonnegative integer");
    o.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("c")) {
    try {
      o.c = complex_from_json(j["c"]);
    } catch (const std::exception& e) {
      throw ConfigError(source, at("c"), e.what());
    }
    if (o.c == cplx{}) throw ConfigError(source, at("c"), "c must be nonzero");
  }
  if (j.contains("free_zeros")) {
    if (!j["free_zeros"].is_array()) throw ConfigError(source, at("free_zeros"), "free_zeros must be an array");
    std::vector<cplx> fz;
    try {
      for (const auto& a : j["free_zeros"]) fz.push_back(complex_from_json(a));
    } catch (const std::exception& e) {
      throw ConfigError(source, at("free_zeros"), e.what());
    }
    o.free_zeros = std::move(fz);
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) throw ConfigError(source, at("tolerances"), "tolerances must be an object");
    const std::map<std::string, double*> slots = {{"twisted_trace", &o.tol.twisted_trace},
                                                  {"quasiperiodicity", &o.tol.quasiperiodicity},
                                                  {"oracle_agreement", &o.tol.oracle_agreement},
                                                  {"gram", &o.tol.gram},
                                                  {"circle", &o.tol.circle},
                                                  {"nullspace", &o.tol.nullspace}};
    for (const auto& [key, value] : t.items()) {
      auto it = slots.find(key);
      if (it == slots.end()) throw ConfigError(source, at(key), "unknown tolerance '" + key + "'");
      if (!value.is_number() || value.get<double>() <= 0.0)
        throw ConfigError(source, at(key), "tolerance '" + key + "' must be a positive number");
      *it->second = value.get<double>();
    }
  }
  return cfg;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace qtrace::cli
