#include "polyrep/cli.hpp"

#include <filesystem>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "polyrep/io.hpp"
#include "polyrep/surface.hpp"

namespace polyrep {

namespace {

struct RunConfig {
  std::string input;
  std::string mode = "normalized";
  std::string k_policy = "search";
  std::int64_t k = 0;
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
  std::optional<double> eps;
  int grid = 64;
  std::string out = ".";
  std::vector<int> faces;
};

class NotSimple : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotAcceptedRun : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Geometry {
  Polytope p;
  FacetForms forms;
  MetricParams metric;
  std::optional<EpsilonParams> eps;
  KBounds kbounds;
};

struct Built {
  Geometry geo;
  InterpolantParams params;
  std::int64_t attempts = 0;
  PolyRepresentation rep;
};

Geometry load_geometry(const RunConfig& config) {
  Geometry geo;
  geo.p = enumerate_vertices(parse_hrep(read_text_file(config.input)));
  if (!check_simple(geo.p)) throw NotSimple("polytope is not simple");
  geo.forms = facet_forms(geo.p, FormMode::Normalized);
  geo.metric = metric_params(geo.p, geo.forms);
  try {
    geo.eps = epsilon_params(geo.metric, geo.p.num_facets(), geo.p.dim);
  } catch (const InterpolantError&) {
    geo.eps.reset();
  }
  std::optional<double> eps = config.eps;
  if (!eps && geo.eps) eps = geo.eps->eps3;
  geo.kbounds = quantitative_k(geo.metric, geo.p.num_vertices(), geo.p.dim, eps);
  return geo;
}

FormMode parse_mode(const std::string& mode) { return mode == "raw" ? FormMode::Raw : FormMode::Normalized; }

MembershipOptions membership_options(const RunConfig& config) {
  MembershipOptions options;
  options.samples = config.samples;
  options.seed = config.seed;
  return options;
}

// Set equality by sampling plus face vanishing: the acceptance test for a candidate k.
bool representation_accepted(const Polytope& p, const FacetForms& forms, const InterpolantParams& params,
                             const RunConfig& config) {
  const PolyRepresentation rep = build_representation(p, forms, params, FormMode::Normalized, 0.0);
  return verify_membership(rep, p, membership_options(config)).accepted() &&
         verify_face_vanishing(rep, p, 50, config.seed).accepted();
}

Built build(const RunConfig& config) {
  Geometry geo = load_geometry(config);
  KSearchOptions options;
  if (config.k_policy == "search") {
    options.policy = KPolicy::Search;
    options.k_max = 2 * geo.kbounds.k;  // at most 2^54, no overflow
  } else if (config.k_policy == "direct") {
    options.policy = KPolicy::Direct;
    options.eps = config.eps;
  } else {
    options.policy = KPolicy::Fixed;
    options.fixed_k = config.k;
  }
  const auto verifier = [&](const VertexInterpolant&, const InterpolantParams& params) {
    return representation_accepted(geo.p, geo.forms, params, config);
  };
  KSearchResult found;
  try {
    found = find_k(geo.p, geo.forms, verifier, options);
  } catch (const InterpolantError& e) {
    throw NotAcceptedRun(e.what());
  }
  PolyRepresentation rep = build_representation(geo.p, geo.forms, found.params, parse_mode(config.mode));
  return Built{.geo = std::move(geo), .params = std::move(found.params), .attempts = found.attempts, .rep = std::move(rep)};
}

std::filesystem::path output_dir(const RunConfig& config) {
  std::filesystem::path dir(config.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory '" + config.out + "'");
  return dir;
}

Json params_document(const Built& built) {
  ParamsEcho echo{.params = &built.params, .metric = built.geo.metric, .eps = built.geo.eps, .kbounds = built.geo.kbounds};
  return params_to_json(echo);
}

int cmd_build(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Built built = build(config);
  const auto dir = output_dir(config);
  for (int i = 1; i < built.rep.dim; ++i) {
    const auto index = static_cast<std::size_t>(i - 1);
    const auto path = dir / ("p" + std::to_string(i) + ".json");
    if (built.rep.expanded_exact[index]) {
      write_text_file(path.string(), poly_to_json(*built.rep.expanded_exact[index]).dump(2) + "\n");
    } else if (built.rep.expanded[index]) {
      write_text_file(path.string(), poly_to_json(*built.rep.expanded[index]).dump(2) + "\n");
    } else {
      err << "p" << i << ": expansion exceeds the term cap, not written\n";
      continue;
    }
    out << "wrote " << path.string() << "\n";
  }
  const auto params_path = dir / "params.json";
  write_text_file(params_path.string(), params_document(built).dump(2) + "\n");
  const auto polytope_path = dir / "polytope.json";
  write_text_file(polytope_path.string(), polytope_to_json(built.geo.p).dump(2) + "\n");
  out << "wrote " << params_path.string() << "\n"
      << "wrote " << polytope_path.string() << "\n"
      << "k = " << built.params.k << " (" << built.attempts << " attempt" << (built.attempts == 1 ? "" : "s") << ")\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream&) {
  const Built built = build(config);
  const Geometry& geo = built.geo;
  const PolyRepresentation& rep = built.rep;

  VerificationReport report = verify_membership(rep, geo.p, membership_options(config));
  report.merge(verify_face_vanishing(rep, geo.p, 50, config.seed));

  // The cone and sandwich checks assume k meets the corresponding bounds.
  KBounds cone_only = quantitative_k(geo.metric, geo.p.num_vertices(), geo.p.dim, std::nullopt);
  if (built.params.k >= cone_only.k) report.merge(verify_cone_separation(rep, geo.p, 1000, config.seed));
  const std::optional<double> eps = config.eps ? config.eps : (geo.eps ? std::optional(geo.eps->eps3) : std::nullopt);
  if (eps && geo.kbounds.eps_bound && static_cast<double>(built.params.k) >= *geo.kbounds.eps_bound) {
    report.merge(verify_sandwich(rep, geo.p, *eps, config.samples, config.seed));
  }

  Json doc = report_to_json(report);
  doc["polytopeHash"] = rep.polytope_hash;
  doc["mode"] = config.mode;
  doc["params"] = params_document(built);
  const auto path = output_dir(config) / "report.json";
  write_text_file(path.string(), doc.dump(2) + "\n");
  out << "wrote " << path.string() << "\n"
      << "k = " << built.params.k << ", inside " << report.samplesInside << ", outside " << report.samplesOutside
      << ", in band " << report.samplesInBand << ", violations " << report.violations.size() << "\n";
  return report.accepted() ? kExitOk : kExitVerificationFailed;
}

int cmd_params(const RunConfig& config, std::ostream& out, std::ostream&) {
  const Geometry geo = load_geometry(config);
  const KBounds& kb = geo.kbounds;
  auto row = [&](const std::string& name, const std::string& value) {
    out << std::left << std::setw(10) << name << value << "\n";
  };
  auto num = [](double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
  };
  row("m", std::to_string(geo.p.num_facets()));
  row("d", std::to_string(geo.p.dim));
  row("n", std::to_string(geo.p.num_vertices()));
  row("m-d", std::to_string(geo.p.num_facets() - geo.p.dim));
  row("gamma", num(geo.metric.gamma));
  row("alpha", num(geo.metric.alpha));
  row("phi", num(geo.metric.phi));
  row("degP", std::to_string(geo.metric.degP));
  if (geo.eps) {
    row("eps1", num(geo.eps->eps1));
    row("eps2", num(geo.eps->eps2));
    row("eps3", num(geo.eps->eps3));
    row("delta", num(geo.eps->delta));
  } else {
    row("eps", "unavailable (delta is not positive)");
  }
  auto bound = [&](const char* name, const std::optional<double>& v, int index) {
    std::string text = v ? num(*v) + " (ceil " + std::to_string(static_cast<std::int64_t>(std::ceil(*v))) + ")" : "-";
    if (kb.binding == index) text += "  <- binding";
    row(name, text);
  };
  bound("k_gamma", kb.gamma_bound, 0);
  bound("k_vertex", kb.vertex_bound, 1);
  bound("k_eps", kb.eps_bound, 2);
  bound("k_cone", kb.cone_bound, 3);
  row("k", std::to_string(kb.k) + (kb.saturated ? " (capped at 2^53)" : ""));

  if (config.out != ".") {
    Json doc{{"gamma", geo.metric.gamma}, {"alpha", geo.metric.alpha}, {"phi", geo.metric.phi}, {"degP", geo.metric.degP}};
    if (geo.eps) {
      doc["eps1"] = geo.eps->eps1;
      doc["eps2"] = geo.eps->eps2;
      doc["eps3"] = geo.eps->eps3;
      doc["delta"] = geo.eps->delta;
    }
    doc["kBounds"] = kbounds_to_json(kb);
    write_text_file((output_dir(config) / "parameters.json").string(), doc.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_surface(const RunConfig& config, std::ostream& out, std::ostream&) {
  // Reject d >= 4 before spending time on the k search.
  {
    const HRep hrep = parse_hrep(read_text_file(config.input));
    if (hrep.dim != 2 && hrep.dim != 3) {
      throw UnsupportedDim("surface output supports d = 2 or 3, got d = " + std::to_string(hrep.dim));
    }
  }
  const Built built = build(config);
  SurfaceOptions options;
  options.faces = config.faces;
  options.grid = config.grid;
  const auto points = surface_points(built.rep, built.geo.p, options);
  const bool planar = built.geo.p.dim == 2;
  const auto path = output_dir(config) / (planar ? "surface.csv" : "surface.obj");
  write_text_file(path.string(), planar ? points_to_csv(points) : points_to_obj(points));
  out << "wrote " << path.string() << " (" << points.size() << " points)\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polynomial representations of simple polytopes", "polyrep"};
  app.require_subcommand(1);
  RunConfig config;

  auto add_common = [&](CLI::App* sub, bool building) {
    sub->add_option("input", config.input, "H-representation JSON file")->required();
    sub->add_option("--eps", config.eps, "eps used in the k bound (default eps3)")->check(CLI::PositiveNumber);
    sub->add_option("--out", config.out, "output directory");
    if (!building) return;
    sub->add_option("--mode", config.mode, "facet form scaling for p_1..p_{d-1}")
        ->check(CLI::IsMember({"normalized", "raw"}));
    sub->add_option("--k-policy", config.k_policy, "how k is chosen")->check(CLI::IsMember({"search", "direct", "fixed"}));
    sub->add_option("--k", config.k, "fixed k (implies --k-policy fixed)")->check(CLI::PositiveNumber);
    sub->add_option("--samples", config.samples, "membership samples")->check(CLI::PositiveNumber);
    sub->add_option("--seed", config.seed, "sampling seed");
  };
  auto* build_cmd = app.add_subcommand("build", "write p_1..p_{d-1}, params and polytope documents");
  add_common(build_cmd, true);
  auto* verify_cmd = app.add_subcommand("verify", "build and verify by sampling; writes report.json");
  add_common(verify_cmd, true);
  auto* params_cmd = app.add_subcommand("params", "print the metric parameters, eps values and k bounds");
  add_common(params_cmd, false);
  auto* surface_cmd = app.add_subcommand("surface", "zero set of min over J of p_j, as CSV (2D) or OBJ (3D)");
  add_common(surface_cmd, true);
  surface_cmd->add_option("--faces", config.faces, "polynomial indices J, e.g. 0,1")->delimiter(',');
  surface_cmd->add_option("--grid", config.grid, "grid cells per axis")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }
  if (config.k > 0 && config.k_policy == "search") config.k_policy = "fixed";
  if (config.k_policy == "fixed" && config.k < 1) {
    err << "error: --k-policy fixed needs --k\n";
    return kExitInputError;
  }

  try {
    if (*build_cmd) return cmd_build(config, out, err);
    if (*verify_cmd) return cmd_verify(config, out, err);
    if (*params_cmd) return cmd_params(config, out, err);
    return cmd_surface(config, out, err);
  } catch (const NotSimple& e) {
    err << "error: " << e.what() << "\n";
    return kExitNotSimple;
  } catch (const NotAcceptedRun& e) {
    err << "error: no accepted representation: " << e.what() << "\n";
    return kExitVerificationFailed;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const PolytopeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const UnsupportedDim& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace polyrep
