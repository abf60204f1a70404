#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "csi/errors.hpp"
#include "csi/report.hpp"

using namespace csi;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kInputError = 2, kConvergence = 3, kInternal = 4 };

struct Common {
  std::string samples = "1e6";
  std::uint64_t seed = 1;
  int shards = 0;
  int workers = 0;
  std::string kernel = "auto";
  std::string format = "json";
  std::string output;
};

// Accepts plain integers and scientific notation such as 1e7 or 2.5e6.
std::uint64_t parse_samples(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("--samples: not a number: " + s);
  }
  if (used != s.size() || !std::isfinite(v) || v < 1 || v > 1e15 || v != std::floor(v))
    throw InputError("--samples must be a positive integer (scientific notation allowed): " + s);
  return static_cast<std::uint64_t>(v);
}

MCOptions mc_options(const Common& c) {
  MCOptions o;
  o.samples = parse_samples(c.samples);
  o.seed = c.seed;
  o.shards = resolve_shards(c.shards);
  o.workers = c.workers;
  return o;
}

IntegrateOptions integrate_options(const Common& c) {
  IntegrateOptions o;
  o.mc = mc_options(c);
  o.kernel = parse_kernel(c.kernel);
  set_active_kernel(o.kernel);
  return o;
}

Json mc_config(const Common& c) {
  Json j = to_json(mc_options(c));
  j["kernel"] = kernel_name(parse_kernel(c.kernel));
  return j;
}

LinkCurve load_checked(const std::string& name) {
  LinkCurve c = load_curve(name);
  require_embedding(c);
  return c;
}

Json curve_config(const std::string& name, const LinkCurve& c) {
  return {{"source", name}, {"name", c.name()}, {"curve", Json::parse(curve_to_json(c))}};
}

void add_common(CLI::App* app, Common& c, bool mc) {
  if (mc) {
    app->add_option("--samples", c.samples, "Monte Carlo samples, e.g. 1e7")->capture_default_str();
    app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    app->add_option("--shards", c.shards, "Shards (default: CSI_SHARDS or 16); results depend on it");
    app->add_option("--workers", c.workers, "Worker threads; results do not depend on it");
    app->add_option("--kernel", c.kernel, "scalar, avx2 or auto")->capture_default_str();
  }
  app->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  app->add_option("--output", c.output, "Write the report to this file instead of stdout");
}

void emit(const Common& c, const Report& r) {
  std::string text = c.format == "text" ? render_text(r) : render_json(r);
  if (c.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(c.output);
    if (!out) throw InputError("cannot write " + c.output);
    out << text;
  }
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) s += (i > 1 ? " " : "") + std::string(argv[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Configuration space integral invariants of knots and links"};
  app.require_subcommand(1);
  Common common;
  Report report;
  int exit_code = kOk;
  std::function<void()> run;

  // diagrams
  auto* diagrams = app.add_subcommand("diagrams", "Enumerate and classify diagrams");
  diagrams->require_subcommand(1);
  std::string support = "S1", out_dir, diagram_file;
  int degree_n = 1;
  auto* enumerate = diagrams->add_subcommand("enumerate", "All diagrams of a degree on a support");
  enumerate->add_option("--support", support, "S1, J, R or <k>S1")->capture_default_str();
  enumerate->add_option("--degree", degree_n, "Degree")->required();
  enumerate->add_option("--out", out_dir, "Write one diagram file per class into this directory");
  add_common(enumerate, common, false);
  enumerate->callback([&] {
    run = [&] {
      SupportModel s = SupportModel::parse(support);
      auto list = enumerate_diagrams(s, degree_n);
      report.config = {{"support", s.describe()}, {"degree", degree_n}};
      Json items = Json::array();
      int principal = 0, subprincipal = 0;
      if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
      for (std::size_t i = 0; i < list.size(); ++i) {
        const Diagram& d = list[i];
        bool p = is_principal(d), sp = is_subprincipal(d);
        principal += p;
        subprincipal += sp;
        Json item = {{"index", i},
                     {"key", key_string(canonical_form(d).key)},
                     {"trivalent", d.vertex_count() - d.univalent_count()},
                     {"automorphisms", automorphism_count(d)},
                     {"principal", p},
                     {"subprincipal", sp}};
        if (out_dir.empty()) {
          item["diagram"] = format_diagram(d);
        } else {
          std::string path = out_dir + "/d" + std::to_string(degree_n) + "-" + std::to_string(i) + ".diagram";
          std::ofstream(path) << format_diagram(d);
          item["file"] = path;
        }
        items.push_back(item);
      }
      report.result = {{"count", list.size()},
                       {"principal", principal},
                       {"subprincipal", subprincipal},
                       {"diagrams", items}};
    };
  });
  auto* classify = diagrams->add_subcommand("classify", "Principal/subprincipal verdicts and the face table");
  classify->add_option("file", diagram_file, "Diagram file")->required();
  add_common(classify, common, false);
  classify->callback([&] {
    run = [&] {
      OrientedDiagram od = parse_diagram(read_file(diagram_file));
      const Diagram& d = od.diagram();
      report.config = {{"file", diagram_file}, {"diagram", format_diagram(od)}};
      Json faces = Json::array();
      int nondegenerate = 0;
      for (const auto& f : enumerate_faces(d)) {
        faces.push_back(to_json(f));
        nondegenerate += !f.degenerate;
      }
      report.result = {{"support", d.support().describe()},
                       {"degree", degree(d)},
                       {"key", key_string(canonical_form(d).key)},
                       {"automorphisms", automorphism_count(d)},
                       {"principal", is_principal(d)},
                       {"subprincipal", is_subprincipal(d)},
                       {"faces", faces.size()},
                       {"nondegenerate_faces", nondegenerate},
                       {"face_table", faces}};
    };
  });

  // algebra
  auto* algebra = app.add_subcommand("algebra", "Exact computations in the diagram spaces");
  algebra->require_subcommand(1);
  std::string vector_file;
  int alg_k = 0, gl_n = 2, gl_k = 0;
  std::int64_t max_labellings = GluingOptions{}.max_labellings;
  auto* reduce = algebra->add_subcommand("reduce", "Basis coordinates of a class vector");
  reduce->add_option("file", vector_file, "Vector file")->required();
  reduce->add_option("--k", alg_k, "Quotient A_n^k (0: A_n)")->capture_default_str();
  add_common(reduce, common, false);
  reduce->callback([&] {
    run = [&] {
      ClassVector v = parse_class_vector(read_file(vector_file));
      auto r = reducer_for(v.support(), v.degree(), alg_k);
      auto coords = r->coordinates(v);
      report.config = {{"file", vector_file}, {"k", alg_k}};
      Json basis = Json::array();
      for (std::size_t i = 0; i < coords.size(); ++i)
        basis.push_back({{"key", key_string(r->basis()[i])},
                         {"diagram", format_diagram(representative(v.support(), r->basis()[i]))},
                         {"coefficient", to_string(coords[i])}});
      report.result = {{"support", v.support().describe()},
                       {"degree", v.degree()},
                       {"dimension", r->dimension()},
                       {"zero", r->is_zero(v)},
                       {"coordinates", basis}};
    };
  });
  auto* gluings = algebra->add_subcommand("check-gluings", "Exact STU' and IHX' verification in A_n^k");
  gluings->add_option("--n", gl_n, "Degree")->required();
  gluings->add_option("--k", gl_k, "k")->required();
  gluings->add_option("--support", support, "Support")->capture_default_str();
  gluings->add_option("--max-labellings", max_labellings, "Labellings per skeleton before sampling")
      ->capture_default_str();
  add_common(gluings, common, false);
  gluings->callback([&] {
    run = [&] {
      GluingOptions o;
      o.max_labellings = max_labellings;
      SupportModel s = SupportModel::parse(support);
      auto g = check_gluings(s, gl_n, gl_k, standard_beta, o);
      report.config = {{"support", s.describe()}, {"n", gl_n}, {"k", gl_k}, {"max_labellings", max_labellings}};
      report.result = to_json(g);
      report.result["verdict"] = g.ok() ? "PASS" : "FAIL";
      if (!g.ok()) exit_code = kCheckFailed;
    };
  });

  // integrate
  std::string curve_name;
  auto* integrate = app.add_subcommand("integrate", "I_L(Gamma) of one diagram");
  integrate->add_option("--diagram", diagram_file, "Diagram file")->required();
  integrate->add_option("--curve", curve_name, "Curve file or catalog name")->required();
  add_common(integrate, common, true);
  integrate->callback([&] {
    run = [&] {
      OrientedDiagram d = parse_diagram(read_file(diagram_file));
      LinkCurve c = load_checked(curve_name);
      if (d.diagram().support().size() != c.size())
        throw InputError("diagram support has " + std::to_string(d.diagram().support().size()) +
                         " components, the curve has " + std::to_string(c.size()));
      auto o = integrate_options(common);
      report.config = {{"diagram", format_diagram(d)}, {"curve", curve_config(curve_name, c)}, {"mc", mc_config(common)}};
      auto e = integrate_diagram(d, c, o);
      report.result = {{"diagram_id", key_string(canonical_form(d.diagram()).key)}, {"estimate", to_json(e)}};
    };
  });

  // invariant
  auto* invariant = app.add_subcommand("invariant", "Classical and finite-type invariants");
  invariant->require_subcommand(1);
  int comp_a = 0, comp_b = 1, comp_m = 0, z_degree = 2, lat_n = 2, lat_k = 2;
  auto* linking = invariant->add_subcommand("linking", "Gauss linking integral of two components");
  linking->add_option("--curve", curve_name, "Curve")->required();
  linking->add_option("--a", comp_a, "First component")->capture_default_str();
  linking->add_option("--b", comp_b, "Second component")->capture_default_str();
  add_common(linking, common, true);
  linking->callback([&] {
    run = [&] {
      LinkCurve c = load_checked(curve_name);
      auto o = integrate_options(common);
      report.config = {{"curve", curve_config(curve_name, c)}, {"a", comp_a}, {"b", comp_b}, {"mc", mc_config(common)}};
      report.result = to_json(linking_number(c, comp_a, comp_b, o));
    };
  });
  auto* selflink = invariant->add_subcommand("selflink", "I_L(theta) of one component");
  selflink->add_option("--curve", curve_name, "Curve")->required();
  selflink->add_option("--component", comp_m, "Component")->capture_default_str();
  add_common(selflink, common, true);
  selflink->callback([&] {
    run = [&] {
      LinkCurve c = load_checked(curve_name);
      auto o = integrate_options(common);
      report.config = {{"curve", curve_config(curve_name, c)}, {"component", comp_m}, {"mc", mc_config(common)}};
      report.result = {{"self_linking", to_json(self_linking(c, comp_m, o))},
                       {"quadrature", writhe_quadrature(c, comp_m)}};
    };
  });
  auto* v2cmd = invariant->add_subcommand("v2", "Second coefficient of the Conway polynomial");
  v2cmd->add_option("--curve", curve_name, "Curve (a knot)")->required();
  add_common(v2cmd, common, true);
  v2cmd->callback([&] {
    run = [&] {
      LinkCurve c = load_checked(curve_name);
      auto o = integrate_options(common);
      report.config = {{"curve", curve_config(curve_name, c)}, {"mc", mc_config(common)}};
      report.result = to_json(v2(c, o));
    };
  });
  auto* z0cmd = invariant->add_subcommand("z0", "Framing-corrected series Z0");
  z0cmd->add_option("--curve", curve_name, "Curve")->required();
  z0cmd->add_option("--degree", z_degree, "Truncation degree (1 to 3)")->capture_default_str();
  add_common(z0cmd, common, true);
  z0cmd->callback([&] {
    run = [&] {
      LinkCurve c = load_checked(curve_name);
      auto o = integrate_options(common);
      report.config = {{"curve", curve_config(curve_name, c)}, {"degree", z_degree}, {"mc", mc_config(common)}};
      ZResult z = z_series(c, z_degree, o);
      Json framing = Json::array();
      for (const auto& f : z.framing) framing.push_back(to_json(f));
      report.result = {{"framing", framing}, {"z", to_json(z.z)}, {"z0", to_json(z0(z, anomaly_series(z_degree)))}};
    };
  });
  auto* lattice = invariant->add_subcommand("lattice", "Z_n^k in the lattice of principal beta values");
  lattice->add_option("--curve", curve_name, "Curve with near-integer framings")->required();
  lattice->add_option("--n", lat_n, "Degree")->capture_default_str();
  lattice->add_option("--k", lat_k, "k")->capture_default_str();
  add_common(lattice, common, true);
  lattice->callback([&] {
    run = [&] {
      LinkCurve c = load_checked(curve_name);
      auto o = integrate_options(common);
      report.config = {{"curve", curve_config(curve_name, c)}, {"n", lat_n}, {"k", lat_k}, {"mc", mc_config(common)}};
      auto r = lattice_check(c, lat_n, lat_k, o);
      report.result = to_json(r);
      if (!r.ok) exit_code = kCheckFailed;
    };
  });

  // anomaly
  auto* anomaly = app.add_subcommand("anomaly", "Anomaly integrals and the framing check");
  anomaly->require_subcommand(1);
  std::string gamma = "theta";
  int points = 100, alpha_degree = 1;
  bool symmetry = false;
  auto* fcmd = anomaly->add_subcommand("f", "f_gamma for a line diagram");
  fcmd->add_option("--gamma", gamma, "theta, tripod, d2-tripod, a1, a2 or a3")->capture_default_str();
  fcmd->add_flag("--symmetry", symmetry, "Also run the pointwise symmetry checks");
  fcmd->add_option("--points", points, "Points for the symmetry checks")->capture_default_str();
  add_common(fcmd, common, true);
  fcmd->callback([&] {
    run = [&] {
      OrientedDiagram g = line_diagram(gamma);
      auto o = integrate_options(common);
      report.config = {{"gamma", gamma}, {"diagram", format_diagram(g)}, {"mc", mc_config(common)}};
      if (symmetry) report.config["points"] = points;
      MCEstimate f = f_gamma(g, o.mc, o.kernel);
      report.result = {{"gamma", gamma},
                       {"degree", degree(g.diagram())},
                       {"automorphisms", automorphism_count(g.diagram())},
                       {"f", to_json(f)}};
      if (symmetry) {
        report.result["s1_even"] = to_json(symmetry_check_s1_even(g, points, 0, common.seed));
        report.result["central"] = to_json(symmetry_check_central(g, points, common.seed));
      }
    };
  });
  auto* alpha = anomaly->add_subcommand("alpha", "alpha assembled from measured f_gamma");
  alpha->add_option("--degree", alpha_degree, "Truncation degree (1 to 3)")->capture_default_str();
  add_common(alpha, common, true);
  alpha->callback([&] {
    run = [&] {
      auto o = integrate_options(common);
      report.config = {{"degree", alpha_degree}, {"mc", mc_config(common)}};
      report.result = to_json(anomaly_alpha(alpha_degree, o.mc, o.kernel));
    };
  });
  auto* framing = anomaly->add_subcommand("framing", "I_L(theta_m) + 2 I_m per component");
  framing->add_option("--curve", curve_name, "Curve")->required();
  add_common(framing, common, true);
  framing->callback([&] {
    run = [&] {
      LinkCurve c = load_checked(curve_name);
      auto o = integrate_options(common);
      report.config = {{"curve", curve_config(curve_name, c)}, {"mc", mc_config(common)}};
      Json rows = Json::array();
      for (const auto& r : framing_report(c, o)) rows.push_back(to_json(r));
      report.result = {{"components", rows}};
    };
  });

  // curve
  auto* curve = app.add_subcommand("curve", "Catalog curves and embedding checks");
  curve->require_subcommand(1);
  auto* list = curve->add_subcommand("list", "Catalog names");
  add_common(list, common, false);
  list->callback([&] {
    run = [&] { report.result = {{"catalog", catalog_names()}}; };
  });
  auto* validate = curve->add_subcommand("validate", "Embedding check with a witness on failure");
  validate->add_option("--curve", curve_name, "Curve")->required();
  add_common(validate, common, false);
  validate->callback([&] {
    run = [&] {
      LinkCurve c = load_curve(curve_name);
      report.config = {{"curve", curve_config(curve_name, c)}};
      auto r = validate_embedding(c);
      report.result = to_json(r);
      if (!r.ok) exit_code = kCheckFailed;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  report.command = join_args(argc, argv);
  auto start = std::chrono::steady_clock::now();
  try {
    run();
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return kConvergence;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const StructureError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInputError;
  } catch (const EmbeddingError& e) {
    std::cerr << "curve is not embedded: " << e.what() << "\n";
    return kInputError;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return kInputError;
  } catch (const CapabilityError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    emit(common, report);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return exit_code;
}
