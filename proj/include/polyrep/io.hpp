#pragma once

// JSON documents: polytope, polynomials, parameters, verification report.

#include <optional>
#include <string>

#include "json.hpp"
#include "polyrep/interpolant.hpp"
#include "polyrep/poly.hpp"
#include "polyrep/polytope.hpp"
#include "polyrep/representation.hpp"

namespace polyrep {

using Json = nlohmann::ordered_json;

/// Unreadable file or malformed document.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// {"vertices": [[...]...], "incidence": [[...]...], "diameter": r}
Json polytope_to_json(const Polytope& p);

/// {"dim": d, "terms": [{"exp": [...], "coef": ...}, ...]} in graded-lex order.
/// Exact coefficients are written as "p/q" strings, doubles as numbers.
Json poly_to_json(const SparsePoly<Rational>& p);
Json poly_to_json(const SparsePoly<double>& p);
/// Reads either coefficient style into an exact polynomial.
SparsePoly<Rational> poly_from_json(const Json& doc);

struct ParamsEcho {
  const InterpolantParams* params = nullptr;
  std::optional<MetricParams> metric;
  std::optional<EpsilonParams> eps;
  std::optional<KBounds> kbounds;
};

/// {"k", "y": {vertexIndex: value}, "aDeviation", "lambdas", ...} plus the
/// metric and epsilon parameters when present.
Json params_to_json(const ParamsEcho& echo);
/// Reads k, y, aDeviation and lambdas back.
InterpolantParams params_from_json(const Json& doc);

Json kbounds_to_json(const KBounds& kb);
Json report_to_json(const VerificationReport& report);

}  // namespace polyrep
