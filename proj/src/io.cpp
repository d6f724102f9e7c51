#include "polyrep/io.hpp"

#include <fstream>
#include <sstream>

namespace polyrep {

namespace {

Json vector_json(const Eigen::Ref<const VectorXd>& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

template <typename Scalar, typename CoefWriter>
Json poly_json(const SparsePoly<Scalar>& p, CoefWriter write) {
  Json terms = Json::array();
  for (const auto& [mono, coef] : p.terms()) {
    terms.push_back(Json{{"exp", mono.exponents}, {"coef", write(coef)}});
  }
  return Json{{"dim", p.dim()}, {"terms", std::move(terms)}};
}

Rational coefficient_from_json(const Json& value) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<long long>());
  if (value.is_number()) return rational_from_double(value.get<double>());
  throw InputError("coefficient must be a number or a \"p/q\" string");
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path + "'");
}

Json polytope_to_json(const Polytope& p) {
  Json vertices = Json::array();
  for (int v = 0; v < p.num_vertices(); ++v) vertices.push_back(vector_json(p.vertex(v)));
  return Json{{"vertices", std::move(vertices)}, {"incidence", p.incidence}, {"diameter", p.diameter}};
}

Json poly_to_json(const SparsePoly<Rational>& p) {
  return poly_json(p, [](const Rational& c) { return to_string(c); });
}

Json poly_to_json(const SparsePoly<double>& p) {
  return poly_json(p, [](double c) { return c; });
}

SparsePoly<Rational> poly_from_json(const Json& doc) {
  try {
    const auto dim = doc.at("dim").get<std::size_t>();
    SparsePoly<Rational> p(dim);
    for (const auto& term : doc.at("terms")) {
      Monomial mono{term.at("exp").get<std::vector<int>>()};
      if (mono.dim() != dim) throw InputError("exponent vector length differs from dim");
      for (int e : mono.exponents) {
        if (e < 0) throw InputError("negative exponent");
      }
      p.add_term(mono, coefficient_from_json(term.at("coef")));
    }
    return p;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed polynomial document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("malformed polynomial document: ") + e.what());
  }
}

Json kbounds_to_json(const KBounds& kb) {
  auto optional_number = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  static const char* const kNames[] = {"gamma", "vertex", "eps", "cone"};
  return Json{{"gamma", optional_number(kb.gamma_bound)},
              {"vertex", kb.vertex_bound},
              {"eps", optional_number(kb.eps_bound)},
              {"cone", kb.cone_bound},
              {"k", kb.k},
              {"binding", kNames[kb.binding]},
              {"saturated", kb.saturated}};
}

Json params_to_json(const ParamsEcho& echo) {
  if (echo.params == nullptr) throw std::invalid_argument("params_to_json: no parameters");
  const InterpolantParams& params = *echo.params;
  Json y = Json::object();
  for (Eigen::Index v = 0; v < params.y.size(); ++v) y[std::to_string(v)] = params.y(v);
  Json doc{{"k", params.k}, {"y", std::move(y)}, {"aDeviation", params.aDeviation}, {"lambdas", vector_json(params.lambdas)}};
  if (echo.metric) {
    doc["gamma"] = echo.metric->gamma;
    doc["alpha"] = echo.metric->alpha;
    doc["phi"] = echo.metric->phi;
    doc["degP"] = echo.metric->degP;
  }
  if (echo.eps) {
    doc["eps1"] = echo.eps->eps1;
    doc["eps2"] = echo.eps->eps2;
    doc["eps3"] = echo.eps->eps3;
    doc["delta"] = echo.eps->delta;
  }
  if (echo.kbounds) doc["kBounds"] = kbounds_to_json(*echo.kbounds);
  return doc;
}

InterpolantParams params_from_json(const Json& doc) {
  try {
    InterpolantParams params;
    params.k = doc.at("k").get<std::int64_t>();
    const auto& y = doc.at("y");
    params.y.resize(static_cast<Eigen::Index>(y.size()));
    for (const auto& [key, value] : y.items()) {
      const int index = std::stoi(key);
      if (index < 0 || index >= params.y.size()) throw InputError("vertex index out of range in y");
      params.y(index) = value.get<double>();
    }
    params.aDeviation = doc.at("aDeviation").get<double>();
    const auto lambdas = doc.at("lambdas").get<std::vector<double>>();
    params.lambdas = Eigen::Map<const VectorXd>(lambdas.data(), static_cast<Eigen::Index>(lambdas.size()));
    return params;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed params document: ") + e.what());
  } catch (const std::logic_error& e) {
    throw InputError(std::string("malformed params document: ") + e.what());
  }
}

Json report_to_json(const VerificationReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    violations.push_back(Json{{"check", v.check}, {"point", vector_json(v.point)}, {"index", v.index}, {"margin", v.margin}});
  }
  Json doc{{"accepted", report.accepted()},
           {"seed", report.seed},
           {"boundaryBand", report.boundaryBand},
           {"samplesInside", report.samplesInside},
           {"samplesOutside", report.samplesOutside},
           {"samplesInBand", report.samplesInBand},
           {"faceVanishMax", report.faceVanishMax},
           {"sandwichOk", report.sandwichOk ? Json(*report.sandwichOk) : Json(nullptr)},
           {"coneOk", report.coneOk ? Json(*report.coneOk) : Json(nullptr)},
           {"violations", std::move(violations)}};
  return doc;
}

}  // namespace polyrep
