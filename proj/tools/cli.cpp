#include "dmpfem/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dmpfem/dmp.hpp"
#include "dmpfem/error.hpp"
#include "dmpfem/mesh_io.hpp"
#include "dmpfem/problem.hpp"
#include "dmpfem/report.hpp"
#include "dmpfem/solver.hpp"

namespace dmpfem {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string> kAllChecks = {"angles", "element", "edge", "assumption", "bounds", "degiorgi"};

std::vector<int> parse_dims(const std::string& spec, std::size_t count) {
  std::vector<int> dims;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t end = std::min(spec.find('x', start), spec.size());
    int v = 0;
    const auto [ptr, ec] = std::from_chars(spec.data() + start, spec.data() + end, v);
    if (ec != std::errc() || ptr != spec.data() + end || v < 1)
      throw Error(ErrorKind::InvalidArgument, "bad lattice size '" + spec + "'");
    dims.push_back(v);
    start = end + 1;
  }
  if (dims.size() != count)
    throw Error(ErrorKind::InvalidArgument, "lattice size '" + spec + "' needs " + std::to_string(count) + " factors");
  return dims;
}

std::vector<double> parse_list(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size())
      throw Error(ErrorKind::InvalidArgument, "bad number '" + item + "' in '" + spec + "'");
    out.push_back(v);
  }
  return out;
}

struct MeshSource {
  std::string file;
  std::string square;
  std::string cube;
  std::string equilateral;
  std::string pattern = "right-diagonal";
  double skew = 0.0;

  void add(CLI::App* app) {
    app->add_option("--mesh", file, "Mesh JSON file");
    app->add_option("--square", square, "Unit-square lattice NxM");
    app->add_option("--cube", cube, "Unit-cube Kuhn lattice NxMxK");
    app->add_option("--equilateral", equilateral, "Equilateral triangle rows NxM");
    app->add_option("--pattern", pattern, "right-diagonal or crisscross")->check(CLI::IsMember({"right-diagonal", "crisscross"}));
    app->add_option("--skew", skew, "Shear x += skew*y, 0 <= skew < 1");
  }

  Mesh build() const {
    const int given = !file.empty() + !square.empty() + !cube.empty() + !equilateral.empty();
    if (given != 1)
      throw Error(ErrorKind::InvalidArgument, "give exactly one of --mesh, --square, --cube, --equilateral");
    if (!file.empty()) return read_mesh_json(file);
    if (!square.empty()) {
      const auto d = parse_dims(square, 2);
      return generate_structured_2d(d[0], d[1], pattern == "crisscross" ? Pattern::Crisscross : Pattern::RightDiagonal, skew);
    }
    if (!equilateral.empty()) {
      const auto d = parse_dims(equilateral, 2);
      return generate_equilateral_2d(d[0], d[1]);
    }
    const auto d = parse_dims(cube, 3);
    return generate_structured_3d(d[0], d[1], d[2]);
  }
};

struct ProblemSource {
  std::string preset = "poisson";
  std::string file;
  std::string f = "0";
  std::string g = "0";
  std::string b;
  std::optional<std::string> c_mode;

  void add(CLI::App* app) {
    app->add_option("--problem", preset, "poisson, advection-diffusion or quasilinear-a")
        ->check(CLI::IsMember({"poisson", "advection-diffusion", "quasilinear-a"}));
    app->add_option("--problem-file", file, "Problem JSON (overrides --problem)");
    app->add_option("--f", f, "Source expression");
    app->add_option("--g", g, "Boundary expression");
    app->add_option("--b", b, "Constant advection, comma separated");
    app->add_option("--c-mode", c_mode, "nonnegative or identically-zero");
  }

  ProblemSpec build(int dim) const {
    ProblemSpec spec;
    if (!file.empty()) {
      spec = read_problem_json(file, dim);
      if (spec.dim != dim) throw Error(ErrorKind::DimensionMismatch, "problem and mesh dimensions differ");
      return spec;
    }
    spec.preset = preset;
    spec.dim = dim;
    spec.f = f;
    spec.g = g;
    if (!b.empty()) spec.b = parse_list(b);
    spec.c_mode = c_mode;
    return spec;
  }
};

struct SolverFlags {
  SolveOptions opts;
  std::string method = "auto";
  int quadrature_degree = 0;

  void add(CLI::App* app) {
    app->add_option("--picard-max-iter", opts.picard_max_iter);
    app->add_option("--picard-tol", opts.picard_tol);
    app->add_option("--linear-max-iter", opts.linear_max_iter);
    app->add_option("--linear-tol", opts.linear_tol);
    app->add_option("--damping", opts.damping);
    app->add_option("--gmres-restart", opts.gmres_restart);
    app->add_option("--linear-method", method)->check(CLI::IsMember({"auto", "gmres", "lu"}));
    app->add_option("--quadrature-degree", quadrature_degree, "0 picks the default");
  }

  SolveOptions options() const {
    SolveOptions o = opts;
    o.linear_method = method == "gmres" ? LinearMethod::Gmres : method == "lu" ? LinearMethod::DenseLu : LinearMethod::Auto;
    return o;
  }

  QuadratureRule rule(const Mesh& mesh, const CoefficientSet& k) const {
    return quadrature_degree > 0 ? quadrature_rule(mesh.dim(), quadrature_degree) : default_rule(mesh, k);
  }

  json to_json() const {
    return {{"picard_max_iter", opts.picard_max_iter},
            {"picard_tol", opts.picard_tol},
            {"linear_max_iter", opts.linear_max_iter},
            {"linear_tol", opts.linear_tol},
            {"damping", opts.damping},
            {"gmres_restart", opts.gmres_restart},
            {"linear_method", method},
            {"quadrature_degree", quadrature_degree}};
  }
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  os << text;
  if (!os) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

template <class Fn>
void write_stream(const fs::path& path, Fn&& fn) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  fn(os);
  if (!os) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir + ": " + ec.message());
  return fs::path(dir);
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

void print_audit(std::ostream& out, const Mesh& mesh) {
  const AngleReport a = acuteness_audit(mesh);
  out << "mesh: dim " << mesh.dim() << ", " << mesh.num_vertices() << " vertices, " << mesh.num_cells()
      << " cells, h = " << fmt(mesh.h()) << '\n';
  out << "audit: max angle " << fmt(a.max_angle * 180.0 / 3.14159265358979323846, 8) << " deg, min angle "
      << fmt(a.min_angle * 180.0 / 3.14159265358979323846, 8) << " deg, " << to_string(a.classification) << '\n';
}

void write_solution(const fs::path& dir, const Mesh& mesh, const SolveResult& r, const json& meta) {
  write_mesh_json((dir / "mesh.json").string(), mesh);
  write_stream(dir / "solution.csv", [&](std::ostream& os) { write_field_csv(os, r.u_h); });
  write_stream(dir / "solution.vtk", [&](std::ostream& os) {
    write_vtk(os, mesh, {{"u_h", r.u_h.values()}}, {}, "dmpfem solution");
  });
  json doc = meta;
  doc["result"] = solve_result_to_json(r);
  write_text(dir / "result.json", doc.dump(2) + "\n");
}

int cmd_mesh_gen(const MeshSource& src, const std::string& output, const std::string& vtk, std::ostream& out) {
  const Mesh mesh = src.build();
  print_audit(out, mesh);
  if (!output.empty()) {
    write_mesh_json(output, mesh);
    out << "wrote " << output << '\n';
  }
  if (!vtk.empty()) {
    const AngleReport a = acuteness_audit(mesh);
    Eigen::VectorXd worst(mesh.num_cells());
    for (Eigen::Index c = 0; c < mesh.num_cells(); ++c) {
      worst(c) = 0.0;
      for (const PairAngle& p : a.cell_angles[c]) worst(c) = std::max(worst(c), p.angle);
    }
    write_stream(vtk, [&](std::ostream& os) { write_vtk(os, mesh, {}, {{"max_angle", worst}}); });
    out << "wrote " << vtk << '\n';
  }
  return kExitOk;
}

int cmd_solve(const MeshSource& msrc, const ProblemSource& psrc, const SolverFlags& flags, const std::string& outdir,
              std::uint64_t seed, std::ostream& out) {
  const Mesh mesh = msrc.build();
  const ProblemSpec spec = psrc.build(mesh.dim());
  const CoefficientSet k = build_coefficients(spec);
  const SolveResult r = picard_solve(mesh, k, flags.options(), std::nullopt, flags.rule(mesh, k));
  const fs::path dir = ensure_dir(outdir);
  write_solution(dir, mesh, r, {{"problem", problem_to_json(spec)}, {"solver", flags.to_json()}, {"seed", seed}});
  out << "converged in " << r.picard_iterations << " Picard iteration" << (r.picard_iterations == 1 ? "" : "s")
      << ", final update " << fmt(r.final_update_norm, 3) << ", residual " << fmt(r.final_nonlinear_residual, 3) << '\n';
  out << "max u_h = " << fmt(r.u_h.values().maxCoeff(), 10) << ", min u_h = " << fmt(r.u_h.values().minCoeff(), 10) << '\n';
  return kExitOk;
}

struct CheckFlags {
  std::string checks = "angles,element,edge,assumption,bounds,degiorgi";
  std::string solution;
  bool solve = false;
  DmpParams params;
  std::optional<double> lambda_star;
  std::string element_case = "auto";

  void add(CLI::App* app) {
    app->add_option("--checks", checks, "Comma separated subset of angles,element,edge,assumption,bounds,degiorgi");
    app->add_option("--solution", solution, "Solution CSV written by solve");
    app->add_flag("--solve", solve, "Solve before checking");
    app->add_option("--p", params.p, "Sobolev exponent p > 2");
    app->add_option("--r", params.r, "Exponent 1 <= r < p-1");
    app->add_option("--lambda-star", lambda_star, "Margin for element cases i/ii");
    app->add_option("--alpha-exponent", params.alpha_exponent, "Acuteness exponent");
    app->add_option("--bound-tol", params.bound_tol);
    app->add_option("--element-case", element_case)
        ->check(CLI::IsMember({"auto", "general-b", "b-zero-c-nonneg", "poisson-like", "i", "ii", "iii"}));
  }

  std::vector<std::string> selected() const {
    std::vector<std::string> out;
    std::stringstream ss(checks);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      if (std::find(kAllChecks.begin(), kAllChecks.end(), item) == kAllChecks.end())
        throw Error(ErrorKind::InvalidArgument, "unknown check '" + item + "'");
      if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
    }
    if (out.empty()) throw Error(ErrorKind::InvalidArgument, "no checks selected");
    return out;
  }
};

std::vector<std::string> keys_for(const std::string& check) {
  if (check == "angles") return {"angles"};
  if (check == "element") return {"element_condition"};
  if (check == "edge") return {"edge_condition"};
  if (check == "assumption") return {"assumption_a"};
  if (check == "bounds") return {"k_star", "sup_uh", "theorem_3_2", "theorem_3_3"};
  return {"level_sets", "de_giorgi"};
}

int cmd_dmp_check(const MeshSource& msrc, const ProblemSource& psrc, const SolverFlags& sflags, CheckFlags cflags,
                  const std::string& outdir, std::uint64_t seed, std::ostream& out) {
  const std::vector<std::string> checks = cflags.selected();
  if (cflags.solve == !cflags.solution.empty())
    throw Error(ErrorKind::InvalidArgument, "give exactly one of --solution or --solve");
  const Mesh mesh = msrc.build();
  const ProblemSpec spec = psrc.build(mesh.dim());
  const CoefficientSet k = build_coefficients(spec);
  const QuadratureRule rule = sflags.rule(mesh, k);
  const fs::path dir = ensure_dir(outdir);

  SolveResult r{P1Field::constant(mesh, 0.0), 0, 0.0, 0.0, 0.0, false, {}};
  if (cflags.solve) {
    r = picard_solve(mesh, k, sflags.options(), std::nullopt, rule);
    write_solution(dir, mesh, r, {{"problem", problem_to_json(spec)}, {"solver", sflags.to_json()}, {"seed", seed}});
  } else {
    std::ifstream in(cflags.solution);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + cflags.solution);
    r.u_h = read_field_csv(in, mesh);
    r.converged = true;
  }

  DmpParams params = cflags.params;
  params.lambda_star = cflags.lambda_star;
  params.element_case = element_case_from_string(cflags.element_case);
  const DmpCertificate cert = dmp_certificate(mesh, r, k, rule, params);

  json doc = certificate_to_json(mesh, cert);
  doc["problem"] = problem_to_json(spec);
  doc["seed"] = seed;
  doc["quadrature_degree"] = rule.degree;
  doc["checks"] = checks;

  bool failed = false;
  for (const auto& check : checks) {
    std::string verdict = "pass";
    for (const auto& key : keys_for(check)) {
      const std::string v = doc[key]["verdict"].get<std::string>();
      if (v == "fail") verdict = "fail";
      else if (v == "not-applicable" && verdict == "pass") verdict = "not-applicable";
    }
    failed = failed || verdict == "fail";
    out << std::left << std::setw(12) << check << verdict << '\n';
  }
  doc["overall"] = failed ? "fail" : "pass";
  write_text(dir / "certificate.json", doc.dump(2) + "\n");
  write_stream(dir / "levelsets.csv", [&](std::ostream& os) { write_levelset_csv(os, cert.levelset_profile); });
  out << "k* = " << fmt(cert.k_star, 10) << ", sup u_h = " << fmt(cert.sup_uh, 10) << '\n';
  out << "wrote " << (dir / "certificate.json").string() << '\n';
  return failed ? kExitCertificateFailed : kExitOk;
}

int cmd_report(const std::vector<std::string>& files, const std::string& csv, std::ostream& out) {
  if (files.empty()) throw Error(ErrorKind::InvalidArgument, "report needs at least one certificate");
  struct Row {
    std::string file;
    double h, max_angle, k_star, sup, amin;
    std::optional<double> c;
    std::vector<std::string> verdicts;
  };
  const std::vector<std::string> keys = {"angles", "element_condition", "edge_condition", "assumption_a",
                                         "theorem_3_2", "theorem_3_3", "de_giorgi"};
  std::vector<Row> rows;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + f);
    json doc;
    try {
      in >> doc;
      Row row{f,
              doc.at("mesh").at("h").get<double>(),
              doc.at("mesh").at("max_angle").get<double>(),
              doc.at("k_star").at("value").get<double>(),
              doc.at("sup_uh").at("value").get<double>(),
              doc.at("assumption_a").at("min_value").get<double>(),
              std::nullopt,
              {}};
      const auto& c = doc.at("theorem_3_2").at("empirical_C");
      if (!c.is_null()) row.c = c.get<double>();
      for (const auto& key : keys) row.verdicts.push_back(doc.at(key).at("verdict").get<std::string>());
      rows.push_back(std::move(row));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ParseError, f + ": " + e.what());
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.h < b.h; });

  const auto cell = [](const std::string& s, int w) {
    std::ostringstream os;
    os << std::left << std::setw(w) << s;
    return os.str();
  };
  const auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return std::string(buf);
  };
  out << cell("h", 14) << cell("max_angle", 14) << cell("k_star", 14) << cell("sup_uh", 14) << cell("assump_min", 14)
      << cell("C_ratio", 14) << cell("angles", 10) << cell("element", 10) << cell("edge", 10) << cell("assump", 10)
      << cell("thm3.2", 10) << cell("thm3.3", 10) << cell("degiorgi", 10) << "file\n";
  for (const Row& r : rows) {
    out << cell(num(r.h), 14) << cell(num(r.max_angle), 14) << cell(num(r.k_star), 14) << cell(num(r.sup), 14)
        << cell(num(r.amin), 14) << cell(r.c ? num(*r.c) : "-", 14);
    for (const auto& v : r.verdicts) out << cell(v == "not-applicable" ? "n/a" : v, 10);
    out << r.file << '\n';
  }
  if (!csv.empty()) {
    write_stream(csv, [&](std::ostream& os) {
      os << "file,h,max_angle,k_star,sup_uh,assumption_min,empirical_C";
      for (const auto& k : keys) os << ',' << k;
      os << '\n';
      for (const Row& r : rows) {
        os << r.file << ',' << num(r.h) << ',' << num(r.max_angle) << ',' << num(r.k_star) << ',' << num(r.sup) << ','
           << num(r.amin) << ',' << (r.c ? num(*r.c) : "");
        for (const auto& v : r.verdicts) os << ',' << v;
        os << '\n';
      }
    });
  }
  return kExitOk;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::PicardDiverged:
      return kExitPicardDiverged;
    case ErrorKind::LinearSolveDiverged:
      return kExitLinearDiverged;
    default:
      return kExitUsage;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"P1 finite elements with discrete maximum principle certificates", "dmpfem"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "Seed recorded in every output");

  auto* gen = app.add_subcommand("mesh-gen", "Generate a structured mesh and audit its angles");
  MeshSource gen_src;
  std::string gen_out, gen_vtk;
  gen_src.add(gen);
  gen->add_option("-o,--output", gen_out, "Mesh JSON output");
  gen->add_option("--vtk", gen_vtk, "VTK output with per-cell max angle");

  auto* solve = app.add_subcommand("solve", "Solve the quasi-linear problem");
  MeshSource solve_mesh;
  ProblemSource solve_problem;
  SolverFlags solve_flags;
  std::string solve_out = ".";
  solve_mesh.add(solve);
  solve_problem.add(solve);
  solve_flags.add(solve);
  solve->add_option("-o,--output-dir", solve_out, "Output directory");

  auto* check = app.add_subcommand("dmp-check", "Certify a solution");
  MeshSource check_mesh;
  ProblemSource check_problem;
  SolverFlags check_solver;
  CheckFlags check_flags;
  std::string check_out = ".";
  check_mesh.add(check);
  check_problem.add(check);
  check_solver.add(check);
  check_flags.add(check);
  check->add_option("-o,--output-dir", check_out, "Output directory");

  auto* report = app.add_subcommand("report", "Tabulate certificates");
  std::vector<std::string> report_files;
  std::string report_csv;
  report->add_option("certificates", report_files, "Certificate JSON files");
  report->add_option("--csv", report_csv, "CSV output");

  std::vector<std::string> argv_storage;
  argv_storage.push_back("dmpfem");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_mesh_gen(gen_src, gen_out, gen_vtk, out);
    if (solve->parsed()) return cmd_solve(solve_mesh, solve_problem, solve_flags, solve_out, seed, out);
    if (check->parsed())
      return cmd_dmp_check(check_mesh, check_problem, check_solver, check_flags, check_out, seed, out);
    return cmd_report(report_files, report_csv, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace dmpfem
