// JSON encodings of the library types. Complex numbers are [re, im] pairs;
// Laurent polynomials are {"<exponent>": [re, im]} objects.

#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "qtrace/positivity.hpp"

namespace qtrace {

using json = nlohmann::json;

json to_json(cplx c);
cplx complex_from_json(const json& j);

json to_json(const LaurentPoly& p);
/// Accepts {"<exp>": [re, im] | number} or {"roots": [...], "leading": [re, im], "min_exp": int},
/// the latter meaning leading * z^min_exp * prod (z - r).
LaurentPoly poly_from_json(const json& j);

json to_json(const AlgebraElement& a);
AlgebraElement element_from_json(const json& j);

json to_json(const MomentTable& mt);
MomentTable moments_from_json(const json& j);

json to_json(const ResidualReport& r);
json to_json(const QuasiPeriodicityReport& r);
json to_json(const DecayReport& r);
json to_json(const GramReport& r);
json to_json(const CirclePositivityReport& r);
json to_json(const OrientationProbe& r);
json to_json(const Tolerances& t);
json to_json(const ClassificationReport& r);

/// Sorted keys, doubles printed with 17 significant digits, non-finite values as null.
std::string dump_deterministic(const json& j, int indent = 2);

}  // namespace qtrace
