#include "dmpfem/dmp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dmpfem/error.hpp"
#include "dmpfem/geometry.hpp"
#include "dmpfem/numeric.hpp"

namespace dmpfem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int local_index(const Mesh& mesh, int cell, int node) {
  for (int i = 0; i <= mesh.dim(); ++i)
    if (mesh.cells()(i, cell) == node) return i;
  throw Error(ErrorKind::InvalidArgument, "node " + std::to_string(node) + " not in cell " + std::to_string(cell));
}

P1Field state_or_zero(const Mesh& mesh, const std::optional<P1Field>& w) {
  if (w) {
    if (w->values().size() != mesh.num_vertices())
      throw Error(ErrorKind::DimensionMismatch, "state field size does not match mesh");
    return *w;
  }
  return P1Field::constant(mesh, 0.0);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::NotApplicable:
      return "not-applicable";
  }
  return "?";
}

const char* to_string(ElementCase c) {
  switch (c) {
    case ElementCase::Auto:
      return "auto";
    case ElementCase::GeneralB:
      return "general-b";
    case ElementCase::BZeroCNonneg:
      return "b-zero-c-nonneg";
    case ElementCase::PoissonLike:
      return "poisson-like";
  }
  return "?";
}

ElementCase element_case_from_string(const std::string& s) {
  for (auto c : {ElementCase::Auto, ElementCase::GeneralB, ElementCase::BZeroCNonneg, ElementCase::PoissonLike})
    if (s == to_string(c)) return c;
  if (s == "i") return ElementCase::GeneralB;
  if (s == "ii") return ElementCase::BZeroCNonneg;
  if (s == "iii") return ElementCase::PoissonLike;
  throw Error(ErrorKind::InvalidArgument, "unknown element case '" + s + "'");
}

double DmpParams::s() const { return r == 1.0 ? kInf : r / (r - 1.0); }

double DmpParams::f_norm_exponent() const { return r == 1.0 ? kInf : p * r / ((p - 1.0) * (r - 1.0)); }

void DmpParams::validate(int dim) const {
  if (!(p > 2.0) || !std::isfinite(p)) throw Error(ErrorKind::InvalidParameters, "p must be finite and > 2");
  if (dim > 2 && !(p < 2.0 * dim / (dim - 2.0)))
    throw Error(ErrorKind::InvalidParameters, "p must be < 2d/(d-2) = " + std::to_string(2.0 * dim / (dim - 2.0)));
  if (!(r >= 1.0 && r < p - 1.0)) throw Error(ErrorKind::InvalidParameters, "r must satisfy 1 <= r < p - 1");
  if (lambda_star && !(*lambda_star > 0.0)) throw Error(ErrorKind::InvalidParameters, "lambda_star must be > 0");
  if (!(alpha_exponent >= 0.0)) throw Error(ErrorKind::InvalidParameters, "alpha_exponent must be >= 0");
  if (!(bound_tol >= 0.0)) throw Error(ErrorKind::InvalidParameters, "bound_tol must be >= 0");
}

double compute_k_star(const Mesh& mesh, const DirichletData& boundary, CMode mode) {
  if (mode == CMode::General)
    throw Error(ErrorKind::UnsupportedCMode, "k* is defined only for c >= 0 or c = 0");
  double k = -kInf;
  for (int v : mesh.boundary_nodes()) {
    if (static_cast<std::size_t>(v) >= boundary.assigned.size() || !boundary.assigned[v])
      throw Error(ErrorKind::MissingBoundaryValue, "boundary node " + std::to_string(v) + " has no value");
    k = std::max(k, boundary.values(v));
  }
  if (mode == CMode::Nonnegative) k = std::max(k, 0.0);
  return k;
}

std::vector<double> cut_levels(const P1Field& u_h, double k_star) {
  std::vector<double> nodal;
  nodal.push_back(k_star);
  for (Eigen::Index i = 0; i < u_h.values().size(); ++i)
    if (u_h[i] >= k_star) nodal.push_back(u_h[i]);
  std::sort(nodal.begin(), nodal.end());
  nodal.erase(std::unique(nodal.begin(), nodal.end()), nodal.end());

  std::vector<double> levels;
  levels.reserve(2 * nodal.size());
  for (std::size_t i = 0; i < nodal.size(); ++i) {
    if (i > 0) {
      const double mid = 0.5 * (nodal[i - 1] + nodal[i]);
      if (mid > nodal[i - 1] && mid < nodal[i]) levels.push_back(mid);
    }
    levels.push_back(nodal[i]);
  }
  return levels;
}

AssumptionSweep assumption_a_sweep(const Mesh& mesh, const P1Field& u_h, const CoefficientSet& coeffs,
                                   const QuadratureRule& rule, double k_star) {
  AssumptionSweep sweep;
  sweep.k_values = cut_levels(u_h, k_star);
  sweep.q_values.assign(sweep.k_values.size(), 0.0);
  const FrozenForm form(mesh, u_h, coeffs, rule);
  parallel_for(sweep.k_values.size(), [&](std::size_t i) {
    const double k = sweep.k_values[i];
    sweep.q_values[i] = form.apply(cut_minus(u_h, k).values(), cut_plus(u_h, k).values());
  });
  double max_abs = 0.0;
  sweep.min_value = kInf;
  for (double q : sweep.q_values) {
    max_abs = std::max(max_abs, std::abs(q));
    sweep.min_value = std::min(sweep.min_value, q);
  }
  sweep.scale = std::max(1.0, max_abs);
  sweep.satisfied = sweep.min_value >= -kSignTol * sweep.scale;
  return sweep;
}

ElementReport element_condition_check(const Mesh& mesh, const CoefficientSet& coeffs, const QuadratureRule& rule,
                                      ElementCase which, std::optional<double> lambda_star,
                                      const std::optional<P1Field>& w) {
  const P1Field state = state_or_zero(mesh, w);
  const FrozenForm form(mesh, state, coeffs, rule);
  const Eigen::Index nc = mesh.num_cells();
  const int nd = mesh.dim() + 1;

  std::vector<char> b_zero(nc), c_zero(nc), c_nonneg(nc);
  parallel_for(static_cast<std::size_t>(nc), [&](std::size_t c) {
    const LocalForm& lf = form.local(static_cast<Eigen::Index>(c));
    const double scale = std::max(lf.diffusion.cwiseAbs().maxCoeff(), mesh.cell_measure(c));
    b_zero[c] = lf.advection.cwiseAbs().maxCoeff() <= 1e-14 * scale;
    c_zero[c] = lf.reaction.cwiseAbs().maxCoeff() <= 1e-14 * scale;
    c_nonneg[c] = lf.reaction.minCoeff() >= -1e-14 * scale;
  });
  const auto all = [](const std::vector<char>& v) { return std::all_of(v.begin(), v.end(), [](char x) { return x != 0; }); };

  ElementReport report;
  if (which == ElementCase::Auto) {
    if (all(b_zero) && all(c_zero))
      which = ElementCase::PoissonLike;
    else if (all(b_zero) && all(c_nonneg))
      which = ElementCase::BZeroCNonneg;
    else
      which = ElementCase::GeneralB;
  }
  report.element_case = which;
  report.lambda_star = lambda_star.value_or(0.1 * coeffs.lambda);
  if (!(report.lambda_star > 0.0)) throw Error(ErrorKind::InvalidParameters, "lambda_star must be > 0");

  if (which == ElementCase::PoissonLike && !(all(b_zero) && all(c_zero))) {
    report.requirements_met = false;
    report.requirement_note = "b and c integrals must vanish on every cell";
  } else if (which == ElementCase::BZeroCNonneg && !(all(b_zero) && all(c_nonneg))) {
    report.requirements_met = false;
    report.requirement_note = "b integrals must vanish and c integrals be nonnegative on every cell";
  }

  const double lam = coeffs.lambda;
  const double tol_scale = std::max(1.0, coeffs.Lambda);
  std::vector<std::vector<ElementPair>> bad(nc);
  std::vector<double> margin(nc, kInf);
  report.cell_pass.assign(nc, 1);
  parallel_for(static_cast<std::size_t>(nc), [&](std::size_t cc) {
    const auto c = static_cast<Eigen::Index>(cc);
    const ShapeData sd = shape_data(mesh, c);
    const Eigen::MatrixXd k = form.local(c).total();
    for (int i = 0; i < nd; ++i)
      for (int j = 0; j < nd; ++j) {
        if (i == j) continue;
        ElementPair pair;
        pair.cell = static_cast<int>(c);
        pair.i = i;
        pair.j = j;
        pair.node_i = mesh.cells()(i, c);
        pair.node_j = mesh.cells()(j, c);
        pair.d = -k(j, i);
        pair.cos_angle = std::cos(angle_from_gradients(sd, i, j));
        const double g = sd.gradient_norms(i) * sd.gradient_norms(j) * sd.measure;
        bool ok;
        if (which == ElementCase::PoissonLike) {
          pair.threshold = lam * g * pair.cos_angle - kSignTol * g * tol_scale;
          ok = pair.d >= pair.threshold;
          if (!ok) pair.reason = "D below lambda cos(alpha) |grad l_i| |grad l_j| |T|";
          if (pair.cos_angle < -kSignTol) {
            ok = false;
            pair.reason = "obtuse angle";
          }
        } else {
          pair.threshold = report.lambda_star * g;
          ok = pair.d >= pair.threshold;
          if (!ok) pair.reason = "D below lambda* |grad l_i| |grad l_j| |T|";
        }
        margin[c] = std::min(margin[c], pair.d - pair.threshold);
        if (!ok) {
          report.cell_pass[c] = 0;
          bad[c].push_back(std::move(pair));
        }
      }
  });

  report.num_pairs = nc * nd * (nd - 1);
  report.min_margin = nc > 0 ? *std::min_element(margin.begin(), margin.end()) : 0.0;
  for (auto& cell_bad : bad)
    for (auto& pair : cell_bad) report.offending.push_back(std::move(pair));
  report.num_failed = static_cast<Eigen::Index>(report.offending.size());
  report.pass = report.requirements_met && report.num_failed == 0;
  return report;
}

EdgeReport edge_condition_check_2d(const Mesh& mesh, const CoefficientSet& coeffs, const QuadratureRule& rule,
                                   const std::optional<P1Field>& w, std::optional<bool> poisson) {
  if (mesh.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "edge condition is implemented for 2D meshes only");
  const std::vector<InteriorEdge> edges = interior_edges_2d(mesh);
  const P1Field state = state_or_zero(mesh, w);
  const FrozenForm form(mesh, state, coeffs, rule);

  EdgeReport report;
  report.poisson = poisson.value_or(coeffs.name == "poisson");
  report.edges.resize(edges.size());
  parallel_for(edges.size(), [&](std::size_t e) {
    const InteriorEdge& edge = edges[e];
    EdgeResult& out = report.edges[e];
    out.node_m = edge.node_m;
    out.node_n = edge.node_n;
    out.alpha = edge.opposite_angles[0];
    out.beta = edge.opposite_angles[1];
    double scale = 0.0;
    for (int s = 0; s < 2; ++s) {
      const int cell = edge.cells[s];
      const int lm = local_index(mesh, cell, edge.node_m);
      const int ln = local_index(mesh, cell, edge.node_n);
      const Eigen::MatrixXd k = form.local(cell).total();
      out.s_mn += k(ln, lm);
      out.s_nm += k(lm, ln);
      const ShapeData sd = shape_data(mesh, cell);
      scale += sd.gradient_norms(lm) * sd.gradient_norms(ln) * sd.measure;
    }
    out.pass = out.s_mn <= 1e-12 * scale && out.s_nm <= 1e-12 * scale;
    if (report.poisson) {
      out.closed_form = -std::sin(out.alpha + out.beta) / (2.0 * std::sin(out.alpha) * std::sin(out.beta));
      out.closed_form_match = std::abs(out.s_mn - out.closed_form) <= 1e-12 * std::max(1.0, std::abs(out.closed_form));
      out.pass = out.pass && out.closed_form_match;
    } else {
      out.closed_form = std::numeric_limits<double>::quiet_NaN();
    }
  });

  report.max_sum = -kInf;
  for (const EdgeResult& e : report.edges) {
    report.max_sum = std::max({report.max_sum, e.s_mn, e.s_nm});
    if (report.poisson) report.max_closed_form_error = std::max(report.max_closed_form_error, std::abs(e.s_mn - e.closed_form));
    if (!e.pass) ++report.num_failed;
  }
  if (report.edges.empty()) report.max_sum = 0.0;
  report.pass = report.num_failed == 0;
  return report;
}

double level_set_measure(const Mesh& mesh, const P1Field& u_h, double k) {
  std::vector<double> parts(mesh.num_cells(), 0.0);
  for (Eigen::Index c = 0; c < mesh.num_cells(); ++c)
    for (int i = 0; i <= mesh.dim(); ++i)
      if (u_h[mesh.cells()(i, c)] > k) {
        parts[c] = mesh.cell_measure(c);
        break;
      }
  return pairwise_sum(parts);
}

LevelSetProfile level_set_profile(const Mesh& mesh, const P1Field& u_h, const std::vector<double>& levels) {
  LevelSetProfile profile;
  profile.k = levels;
  std::sort(profile.k.begin(), profile.k.end());
  profile.measure.assign(profile.k.size(), 0.0);
  parallel_for(profile.k.size(), [&](std::size_t i) { profile.measure[i] = level_set_measure(mesh, u_h, profile.k[i]); });
  return profile;
}

namespace {

void check_de_giorgi(const DeGiorgiInput& in) {
  if (!(in.M > 0.0)) throw Error(ErrorKind::InvalidParameters, "M must be > 0");
  if (!(in.alpha > 0.0)) throw Error(ErrorKind::InvalidParameters, "alpha must be > 0");
  if (!(in.beta > 1.0)) throw Error(ErrorKind::InvalidParameters, "beta must be > 1");
  if (!in.phi) throw Error(ErrorKind::InvalidParameters, "phi is not set");
}

std::vector<double> k_tau_points(double k0, double rho, int tau_max) {
  std::vector<double> k(tau_max + 1);
  for (int t = 0; t <= tau_max; ++t) k[t] = k0 + rho - rho / std::ldexp(1.0, t);
  return k;
}

struct Sampled {
  std::vector<double> k;
  std::vector<double> phi;
};

Sampled sample(const DeGiorgiInput& in, const std::vector<double>& extra) {
  Sampled s;
  for (double k : in.grid)
    if (k >= in.k0) s.k.push_back(k);
  for (double k : extra)
    if (k >= in.k0) s.k.push_back(k);
  s.k.push_back(in.k0);
  std::sort(s.k.begin(), s.k.end());
  s.k.erase(std::unique(s.k.begin(), s.k.end()), s.k.end());
  s.phi.resize(s.k.size());
  for (std::size_t i = 0; i < s.k.size(); ++i) s.phi[i] = in.phi(s.k[i]);
  return s;
}

double required_m(const Sampled& s, double alpha, double beta) {
  double m = 0.0;
  for (std::size_t a = 0; a < s.k.size(); ++a) {
    if (s.phi[a] <= 0.0) continue;
    for (std::size_t b = 0; b < a; ++b) {
      if (s.phi[b] <= 0.0) return kInf;
      m = std::max(m, (s.k[a] - s.k[b]) * std::pow(s.phi[a] / std::pow(s.phi[b], beta), 1.0 / alpha));
    }
  }
  return m;
}

}  // namespace

double de_giorgi_rho(const DeGiorgiInput& input) {
  check_de_giorgi(input);
  const double phi0 = input.phi(input.k0);
  if (!(phi0 >= 0.0)) throw Error(ErrorKind::InvalidParameters, "phi(k0) must be >= 0");
  return input.M * std::pow(phi0, (input.beta - 1.0) / input.alpha) * std::pow(2.0, input.beta / (input.beta - 1.0));
}

DeGiorgiReport de_giorgi_verify(const DeGiorgiInput& input, double rho, int tau_max) {
  check_de_giorgi(input);
  if (!(rho >= 0.0)) throw Error(ErrorKind::InvalidParameters, "rho must be >= 0");
  if (tau_max < 0) throw Error(ErrorKind::InvalidParameters, "tau_max must be >= 0");

  DeGiorgiReport rep;
  rep.rho = rho;
  rep.r = std::pow(2.0, input.alpha / (input.beta - 1.0));
  rep.note =
      "rho is the explicit value M phi(k0)^((beta-1)/alpha) 2^(beta/(beta-1)) that closes the induction; "
      "stated as a lower bound on rho the inequality runs the other way";
  rep.k_tau = k_tau_points(input.k0, rho, tau_max);

  const Sampled s = sample(input, rep.k_tau);
  for (std::size_t i = 1; i < s.phi.size(); ++i)
    if (s.phi[i] > s.phi[i - 1] * (1 + 1e-12))
      throw Error(ErrorKind::InvalidParameters, "phi is increasing at k = " + std::to_string(s.k[i]));

  for (std::size_t a = 0; a < s.k.size() && rep.hypothesis_holds; ++a) {
    if (s.phi[a] <= 0.0) continue;
    for (std::size_t b = 0; b < a; ++b) {
      const double bound = std::pow(input.M / (s.k[a] - s.k[b]), input.alpha) * std::pow(s.phi[b], input.beta);
      if (s.phi[a] > bound * (1 + 1e-12)) {
        rep.hypothesis_holds = false;
        rep.violation_s = s.k[a];
        rep.violation_k = s.k[b];
        break;
      }
    }
  }
  if (!rep.hypothesis_holds) rep.status = DeGiorgiStatus::HypothesisViolated;

  const double phi0 = input.phi(input.k0);
  for (int t = 0; t <= tau_max; ++t) {
    const double phi = input.phi(rep.k_tau[t]);
    const double bound = phi0 / std::pow(rep.r, t);
    rep.phi_tau.push_back(phi);
    rep.bound_tau.push_back(bound);
    if (phi > bound * (1 + 1e-12) && rep.decay_holds) {
      rep.decay_holds = false;
      rep.first_decay_violation = t;
    }
  }
  rep.phi_tail = input.phi(input.k0 + rho);
  rep.tail_holds = rep.phi_tail <= rep.bound_tau.back() * (1 + 1e-12);
  return rep;
}

double fit_de_giorgi_m(const DeGiorgiInput& input, int tau_max) {
  DeGiorgiInput in = input;
  in.M = 1.0;
  check_de_giorgi(in);
  if (in.phi(in.k0) <= 0.0) return 1.0;
  double m = required_m(sample(in, {}), in.alpha, in.beta);
  if (!std::isfinite(m)) throw Error(ErrorKind::InvalidParameters, "phi vanishes below a positive value");
  m = std::max(m, std::numeric_limits<double>::min());
  for (int iter = 0; iter < 100; ++iter) {
    in.M = m;
    const double next = required_m(sample(in, k_tau_points(in.k0, de_giorgi_rho(in), tau_max)), in.alpha, in.beta);
    if (next <= m) break;
    m = next;
  }
  return m * (1 + 1e-12);
}

double source_norm(const Mesh& mesh, const CoefficientSet::SourceFn& f, double exponent) {
  if (!(exponent >= 1.0)) throw Error(ErrorKind::InvalidParameters, "norm exponent must be >= 1");
  const QuadratureRule rule = quadrature_rule(mesh.dim(), max_quadrature_degree(mesh.dim()));
  if (std::isinf(exponent)) {
    double m = 0.0;
    for (Eigen::Index v = 0; v < mesh.num_vertices(); ++v) m = std::max(m, std::abs(f(mesh.vertices().col(v))));
    for (Eigen::Index c = 0; c < mesh.num_cells(); ++c)
      for (Eigen::Index q = 0; q < rule.size(); ++q)
        m = std::max(m, std::abs(f(physical_point(mesh, c, rule.points.col(q)))));
    return m;
  }
  const double integral = integrate(mesh, Integrand([&](const Eigen::VectorXd& x) { return std::pow(std::abs(f(x)), exponent); }), rule);
  return std::pow(integral, 1.0 / exponent);
}

Verdict DmpCertificate::angles_verdict() const {
  return angles.classification == AngleClass::Obtuse ? Verdict::Fail : Verdict::Pass;
}

Verdict DmpCertificate::theorem_3_2_verdict() const {
  if (!assumption.satisfied || !zeroth_order.holds) return Verdict::NotApplicable;
  if (f_norm == 0.0) return bound_satisfied ? Verdict::Pass : Verdict::Fail;
  return empirical_C && std::isfinite(*empirical_C) ? Verdict::Pass : Verdict::Fail;
}

Verdict DmpCertificate::theorem_3_3_verdict() const {
  if (!theorem_3_3_applicable) return Verdict::NotApplicable;
  return bound_satisfied ? Verdict::Pass : Verdict::Fail;
}

Verdict DmpCertificate::assumption_verdict() const { return assumption.satisfied ? Verdict::Pass : Verdict::Fail; }

Verdict DmpCertificate::element_verdict() const { return element_condition.pass ? Verdict::Pass : Verdict::Fail; }

Verdict DmpCertificate::edge_verdict() const {
  if (!edge_condition) return Verdict::NotApplicable;
  return edge_condition->pass ? Verdict::Pass : Verdict::Fail;
}

Verdict DmpCertificate::level_sets_verdict() const {
  for (std::size_t i = 0; i < levelset_profile.k.size(); ++i) {
    if (i > 0 && levelset_profile.measure[i] > levelset_profile.measure[i - 1]) return Verdict::Fail;
    if (levelset_profile.k[i] >= sup_uh && levelset_profile.measure[i] != 0.0) return Verdict::Fail;
  }
  return Verdict::Pass;
}

Verdict DmpCertificate::de_giorgi_verdict() const {
  if (de_giorgi.status == DeGiorgiStatus::HypothesisViolated) return Verdict::NotApplicable;
  return de_giorgi.decay_holds && de_giorgi.tail_holds ? Verdict::Pass : Verdict::Fail;
}

DmpCertificate dmp_certificate(const Mesh& mesh, const SolveResult& solve, const CoefficientSet& coeffs,
                               const QuadratureRule& rule, const DmpParams& params) {
  if (!solve.converged) throw Error(ErrorKind::NotConverged, "refusing to certify an unconverged solution");
  params.validate(mesh.dim());
  const P1Field& u = solve.u_h;
  if (u.values().size() != mesh.num_vertices())
    throw Error(ErrorKind::DimensionMismatch, "solution size does not match mesh");

  DmpCertificate cert;
  cert.params = params;
  cert.c_mode = coeffs.c_mode;

  DirichletData boundary;
  boundary.assigned.assign(mesh.num_vertices(), 0);
  boundary.values = u.values();
  for (int v : mesh.boundary_nodes()) boundary.assigned[v] = 1;
  cert.k_star = compute_k_star(mesh, boundary, coeffs.c_mode);
  cert.sup_uh = u.values().maxCoeff();

  cert.angles = acuteness_audit(mesh, params.alpha_exponent);

  const QuadratureRule fine = quadrature_rule(mesh.dim(), max_quadrature_degree(mesh.dim()));
  cert.f_nonpositive = true;
  for (Eigen::Index c = 0; c < mesh.num_cells() && cert.f_nonpositive; ++c)
    for (Eigen::Index q = 0; q < fine.size(); ++q)
      if (coeffs.f(physical_point(mesh, c, fine.points.col(q))) > 0.0) {
        cert.f_nonpositive = false;
        break;
      }
  for (Eigen::Index v = 0; v < mesh.num_vertices() && cert.f_nonpositive; ++v)
    if (coeffs.f(mesh.vertices().col(v)) > 0.0) cert.f_nonpositive = false;
  cert.h_nu = mesh.h() * coeffs.nu;
  cert.theorem_3_3_applicable = cert.f_nonpositive && cert.h_nu < 1.0;

  cert.assumption = assumption_a_sweep(mesh, u, coeffs, rule, cert.k_star);
  cert.bound_satisfied = cert.sup_uh <= cert.k_star + params.bound_tol;
  cert.theorem_3_3_holds = cert.theorem_3_3_applicable && cert.assumption.satisfied && cert.bound_satisfied;

  cert.f_norm_exponent = params.f_norm_exponent();
  cert.f_norm = source_norm(mesh, coeffs.f, cert.f_norm_exponent);
  if (cert.f_norm > 0.0) cert.empirical_C = std::max(cert.sup_uh - cert.k_star, 0.0) / cert.f_norm;
  cert.zeroth_order = check_zeroth_order_condition(mesh, u, coeffs, rule);

  cert.element_condition = element_condition_check(mesh, coeffs, rule, params.element_case, params.lambda_star, u);
  if (mesh.dim() == 2) cert.edge_condition = edge_condition_check_2d(mesh, coeffs, rule, u);

  cert.levelset_profile = level_set_profile(mesh, u, cert.assumption.k_values);

  DeGiorgiInput dg;
  dg.alpha = params.p;
  dg.beta = (params.p - 1.0) / params.r;
  dg.k0 = cert.k_star;
  dg.phi = [&mesh, &u](double k) { return level_set_measure(mesh, u, k); };
  dg.grid = cert.assumption.k_values;
  dg.M = fit_de_giorgi_m(dg);
  cert.de_giorgi_m = dg.M;
  cert.de_giorgi = de_giorgi_verify(dg, de_giorgi_rho(dg));
  return cert;
}

}  // namespace dmpfem
