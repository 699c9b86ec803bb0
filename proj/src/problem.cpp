#include "dmpfem/problem.hpp"

#include <cmath>
#include <fstream>

#include "dmpfem/error.hpp"
#include "dmpfem/expression.hpp"

namespace dmpfem {

namespace {

Expression::Vars pack(const Eigen::VectorXd& x, double eta, const Eigen::VectorXd* p) {
  Expression::Vars v{};
  for (Eigen::Index i = 0; i < x.size() && i < 3; ++i) v[Expression::X + i] = x(i);
  v[Expression::Eta] = eta;
  if (p)
    for (Eigen::Index i = 0; i < p->size() && i < 3; ++i) v[Expression::P1 + i] = (*p)(i);
  return v;
}

CoefficientSet::SourceFn source(const Expression& e) {
  return [e](const Eigen::VectorXd& x) { return e(pack(x, 0.0, nullptr)); };
}

void no_state(const Expression& e, const char* what) {
  if (e.state_dependent())
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " may depend on position only");
}

}  // namespace

CoefficientSet build_coefficients(const ProblemSpec& spec) {
  if (spec.dim != 2 && spec.dim != 3) throw Error(ErrorKind::InvalidArgument, "dim must be 2 or 3");
  const Expression f = Expression::parse(spec.f, spec.dim);
  const Expression g = Expression::parse(spec.g, spec.dim);
  no_state(f, "f");
  no_state(g, "g");

  CoefficientSet k;
  if (spec.preset == "poisson") {
    k = poisson(spec.dim);
  } else if (spec.preset == "advection-diffusion") {
    if (static_cast<int>(spec.b.size()) != spec.dim)
      throw Error(ErrorKind::InvalidArgument, "advection-diffusion needs b with " + std::to_string(spec.dim) + " components");
    k = advection_diffusion(Eigen::Map<const Eigen::VectorXd>(spec.b.data(), spec.dim));
  } else if (spec.preset == "quasilinear-a") {
    k = quasilinear_a(spec.dim);
  } else if (spec.preset == "custom") {
    const Expression a = Expression::parse(spec.a, spec.dim);
    const Expression c = Expression::parse(spec.c, spec.dim);
    if (c.uses(Expression::P1) || c.uses(Expression::P2) || c.uses(Expression::P3))
      throw Error(ErrorKind::InvalidArgument, "c may not depend on the gradient");
    std::vector<Expression> b;
    for (const auto& s : spec.b_expr) b.push_back(Expression::parse(s, spec.dim));
    if (b.empty()) b.assign(spec.dim, Expression::constant(0.0));
    if (static_cast<int>(b.size()) != spec.dim)
      throw Error(ErrorKind::InvalidArgument, "b needs " + std::to_string(spec.dim) + " components");

    k.a = [a](const Eigen::VectorXd& x, double eta, const Eigen::VectorXd& p) { return a(pack(x, eta, &p)); };
    k.b = [b](const Eigen::VectorXd& x, double eta, const Eigen::VectorXd& p) {
      Eigen::VectorXd out(b.size());
      const auto v = pack(x, eta, &p);
      for (std::size_t i = 0; i < b.size(); ++i) out(i) = b[i](v);
      return out;
    };
    k.c = [c](const Eigen::VectorXd& x, double eta) { return c(pack(x, eta, nullptr)); };

    bool b_constant = true;
    for (const auto& e : b) b_constant = b_constant && e.is_constant();
    if (b_constant)
      k.div_b = [](const Eigen::VectorXd&, double, const Eigen::VectorXd&) { return 0.0; };
    k.state_dependent = a.state_dependent() || c.state_dependent();
    for (const auto& e : b) k.state_dependent = k.state_dependent || e.state_dependent();
    k.constant = a.is_constant() && b_constant && c.is_constant() && f.is_constant();

    const bool c_zero = c.is_constant() && c({}) == 0.0;
    k.c_mode = spec.c_mode ? cmode_from_string(*spec.c_mode) : (c_zero ? CMode::IdenticallyZero : CMode::General);
    if (!spec.lambda || !spec.Lambda) throw Error(ErrorKind::InvalidArgument, "custom problems declare lambda and Lambda");
    k.lambda = *spec.lambda;
    k.Lambda = *spec.Lambda;
    if (spec.nu) {
      k.nu = *spec.nu;
    } else if (b_constant && c.is_constant()) {
      double s = c({}) * c({});
      for (const auto& e : b) s += e({}) * e({});
      k.nu = std::sqrt(s) / k.lambda;
    } else {
      throw Error(ErrorKind::InvalidArgument, "custom problems with variable b or c declare nu");
    }
    k.name = "custom";
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown problem preset '" + spec.preset + "'");
  }

  if (spec.preset != "custom") {
    if (spec.lambda) k.lambda = *spec.lambda;
    if (spec.Lambda) k.Lambda = *spec.Lambda;
    if (spec.nu) k.nu = *spec.nu;
    if (spec.c_mode) k.c_mode = cmode_from_string(*spec.c_mode);
    k.constant = k.constant && f.is_constant();
  }
  if (!(k.lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be > 0");
  k.f = source(f);
  k.g = source(g);
  return k;
}

nlohmann::json problem_to_json(const ProblemSpec& spec) {
  nlohmann::json j;
  j["preset"] = spec.preset;
  j["dim"] = spec.dim;
  j["f"] = spec.f;
  j["g"] = spec.g;
  if (!spec.b.empty()) j["b"] = spec.b;
  if (spec.preset == "custom") {
    j["a"] = spec.a;
    j["b_expr"] = spec.b_expr;
    j["c"] = spec.c;
  }
  if (spec.lambda) j["lambda"] = *spec.lambda;
  if (spec.Lambda) j["Lambda"] = *spec.Lambda;
  if (spec.nu) j["nu"] = *spec.nu;
  if (spec.c_mode) j["c_mode"] = *spec.c_mode;
  return j;
}

ProblemSpec problem_from_json(const nlohmann::json& doc, int default_dim) {
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "problem spec must be a JSON object");
  ProblemSpec s;
  try {
    s.preset = doc.value("preset", std::string("custom"));
    s.dim = doc.value("dim", default_dim);
    s.f = doc.value("f", std::string("0"));
    s.g = doc.value("g", std::string("0"));
    if (doc.contains("b")) {
      if (s.preset == "custom")
        s.b_expr = doc.at("b").get<std::vector<std::string>>();
      else
        s.b = doc.at("b").get<std::vector<double>>();
    }
    if (doc.contains("b_expr")) s.b_expr = doc.at("b_expr").get<std::vector<std::string>>();
    s.a = doc.value("a", std::string("1"));
    s.c = doc.value("c", std::string("0"));
    if (doc.contains("lambda")) s.lambda = doc.at("lambda").get<double>();
    if (doc.contains("Lambda")) s.Lambda = doc.at("Lambda").get<double>();
    if (doc.contains("nu")) s.nu = doc.at("nu").get<double>();
    if (doc.contains("c_mode")) s.c_mode = doc.at("c_mode").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("problem spec: ") + e.what());
  }
  return s;
}

ProblemSpec read_problem_json(const std::string& path, int default_dim) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
  return problem_from_json(doc, default_dim);
}

}  // namespace dmpfem
