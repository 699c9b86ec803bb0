#include "dmpfem/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace dmpfem {

namespace {

using nlohmann::json;

// Non-finite values become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

json zeroth_order_json(const ZerothOrderReport& z) {
  return {{"min_value", number(z.min_value)},
          {"holds", z.holds},
          {"finite_differences", z.finite_differences},
          {"note", z.note}};
}

json element_json(const ElementReport& e, Verdict v) {
  json offending = json::array();
  for (const ElementPair& p : e.offending)
    offending.push_back({{"cell", p.cell},
                         {"i", p.i},
                         {"j", p.j},
                         {"node_i", p.node_i},
                         {"node_j", p.node_j},
                         {"D", number(p.d)},
                         {"threshold", number(p.threshold)},
                         {"cos_angle", number(p.cos_angle)},
                         {"reason", p.reason}});
  json failed_cells = json::array();
  for (std::size_t c = 0; c < e.cell_pass.size(); ++c)
    if (!e.cell_pass[c]) failed_cells.push_back(c);
  return {{"verdict", to_string(v)},
          {"case", to_string(e.element_case)},
          {"lambda_star", number(e.lambda_star)},
          {"num_pairs", e.num_pairs},
          {"num_failed", e.num_failed},
          {"min_margin", number(e.min_margin)},
          {"requirements_met", e.requirements_met},
          {"requirement_note", e.requirement_note},
          {"failed_cells", failed_cells},
          {"offending", offending}};
}

json edge_json(const std::optional<EdgeReport>& report, Verdict v) {
  json out = {{"verdict", to_string(v)}};
  if (!report) {
    out["note"] = "edge sums are checked for 2D meshes only";
    return out;
  }
  json nodes = json::array(), offending = json::array();
  std::vector<double> s_mn, s_nm, alpha, beta, closed;
  for (const EdgeResult& e : report->edges) {
    nodes.push_back({e.node_m, e.node_n});
    s_mn.push_back(e.s_mn);
    s_nm.push_back(e.s_nm);
    alpha.push_back(e.alpha);
    beta.push_back(e.beta);
    closed.push_back(e.closed_form);
    if (!e.pass)
      offending.push_back({{"nodes", {e.node_m, e.node_n}},
                           {"s_mn", number(e.s_mn)},
                           {"s_nm", number(e.s_nm)},
                           {"alpha", number(e.alpha)},
                           {"beta", number(e.beta)},
                           {"closed_form_match", e.closed_form_match}});
  }
  out["poisson"] = report->poisson;
  out["num_edges"] = report->edges.size();
  out["num_failed"] = report->num_failed;
  out["max_sum"] = number(report->max_sum);
  out["nodes"] = nodes;
  out["s_mn"] = numbers(s_mn);
  out["s_nm"] = numbers(s_nm);
  out["alpha"] = numbers(alpha);
  out["beta"] = numbers(beta);
  if (report->poisson) {
    out["closed_form"] = numbers(closed);
    out["max_closed_form_error"] = number(report->max_closed_form_error);
  }
  out["offending"] = offending;
  return out;
}

json de_giorgi_json(const DmpCertificate& cert) {
  const DeGiorgiReport& d = cert.de_giorgi;
  json out = {{"verdict", to_string(cert.de_giorgi_verdict())},
              {"status", d.status == DeGiorgiStatus::Ok ? "ok" : "hypothesis-violated"},
              {"M", number(cert.de_giorgi_m)},
              {"M_source", "smallest M satisfying the hypothesis on the level grid"},
              {"alpha", number(cert.params.p)},
              {"beta", number((cert.params.p - 1.0) / cert.params.r)},
              {"k0", number(cert.k_star)},
              {"rho", number(d.rho)},
              {"r", number(d.r)},
              {"hypothesis_holds", d.hypothesis_holds},
              {"decay_holds", d.decay_holds},
              {"first_decay_violation", d.first_decay_violation},
              {"tail_holds", d.tail_holds},
              {"phi_tail", number(d.phi_tail)},
              {"k_tau", numbers(d.k_tau)},
              {"phi_tau", numbers(d.phi_tau)},
              {"bound_tau", numbers(d.bound_tau)},
              {"note", d.note}};
  if (!d.hypothesis_holds) out["violation"] = {{"s", number(d.violation_s)}, {"k", number(d.violation_k)}};
  return out;
}

}  // namespace

json solve_result_to_json(const SolveResult& r) {
  const Eigen::VectorXd& u = r.u_h.values();
  return {{"converged", r.converged},
          {"picard_iterations", r.picard_iterations},
          {"final_update_norm", number(r.final_update_norm)},
          {"final_linear_residual", number(r.final_linear_residual)},
          {"final_nonlinear_residual", number(r.final_nonlinear_residual)},
          {"update_history", numbers(r.update_history)},
          {"num_nodes", u.size()},
          {"min_uh", number(u.size() ? u.minCoeff() : 0.0)},
          {"max_uh", number(u.size() ? u.maxCoeff() : 0.0)}};
}

json certificate_to_json(const Mesh& mesh, const DmpCertificate& cert) {
  json doc;
  const AngleReport& a = cert.angles;
  doc["mesh"] = {{"dim", mesh.dim()},
                 {"num_vertices", mesh.num_vertices()},
                 {"num_cells", mesh.num_cells()},
                 {"h", number(mesh.h())},
                 {"max_angle", number(a.max_angle)},
                 {"min_angle", number(a.min_angle)},
                 {"classification", to_string(a.classification)}};
  const DmpParams& p = cert.params;
  doc["params"] = {{"p", number(p.p)},
                   {"r", number(p.r)},
                   {"q", number(p.q())},
                   {"s", number(p.s())},
                   {"f_norm_exponent", number(p.f_norm_exponent())},
                   {"lambda_star", number(cert.element_condition.lambda_star)},
                   {"alpha_exponent", number(p.alpha_exponent)},
                   {"bound_tol", number(p.bound_tol)}};

  doc["angles"] = {{"verdict", to_string(cert.angles_verdict())},
                   {"classification", to_string(a.classification)},
                   {"max_angle", number(a.max_angle)},
                   {"min_angle", number(a.min_angle)},
                   {"gamma_fit", number(a.gamma_fit)},
                   {"acute_exponent", number(a.acute_exponent)},
                   {"max_aspect", number(a.max_aspect)}};
  doc["k_star"] = {{"verdict", to_string(Verdict::Pass)}, {"value", number(cert.k_star)}, {"c_mode", to_string(cert.c_mode)}};
  doc["sup_uh"] = {{"verdict", to_string(cert.theorem_3_3_verdict())},
                   {"value", number(cert.sup_uh)},
                   {"excess_over_k_star", number(cert.sup_uh - cert.k_star)}};

  json t32 = {{"verdict", to_string(cert.theorem_3_2_verdict())},
              {"f_norm", number(cert.f_norm)},
              {"f_norm_exponent", number(cert.f_norm_exponent)},
              {"empirical_C", cert.empirical_C ? number(*cert.empirical_C) : json(nullptr)},
              {"assumption_a_satisfied", cert.assumption.satisfied},
              {"zeroth_order", zeroth_order_json(cert.zeroth_order)}};
  doc["theorem_3_2"] = t32;
  doc["theorem_3_3"] = {{"verdict", to_string(cert.theorem_3_3_verdict())},
                        {"applicable", cert.theorem_3_3_applicable},
                        {"holds", cert.theorem_3_3_holds},
                        {"f_nonpositive", cert.f_nonpositive},
                        {"h_nu", number(cert.h_nu)},
                        {"h_nu_below_one", cert.h_nu < 1.0},
                        {"bound_satisfied", cert.bound_satisfied},
                        {"assumption_a_satisfied", cert.assumption.satisfied},
                        {"bound", number(cert.k_star)},
                        {"tol", number(p.bound_tol)}};

  doc["assumption_a"] = {{"verdict", to_string(cert.assumption_verdict())},
                         {"satisfied", cert.assumption.satisfied},
                         {"min_value", number(cert.assumption.min_value)},
                         {"scale", number(cert.assumption.scale)},
                         {"k_values", numbers(cert.assumption.k_values)},
                         {"q_values", numbers(cert.assumption.q_values)}};
  doc["element_condition"] = element_json(cert.element_condition, cert.element_verdict());
  doc["edge_condition"] = edge_json(cert.edge_condition, cert.edge_verdict());
  doc["level_sets"] = {{"verdict", to_string(cert.level_sets_verdict())},
                       {"k", numbers(cert.levelset_profile.k)},
                       {"measure", numbers(cert.levelset_profile.measure)}};
  doc["de_giorgi"] = de_giorgi_json(cert);
  return doc;
}

void write_levelset_csv(std::ostream& os, const LevelSetProfile& profile) {
  os << "k,measure\n";
  char buf[64];
  for (std::size_t i = 0; i < profile.k.size(); ++i) {
    auto r = std::to_chars(buf, buf + sizeof buf, profile.k[i]);
    os.write(buf, r.ptr - buf) << ',';
    r = std::to_chars(buf, buf + sizeof buf, profile.measure[i]);
    os.write(buf, r.ptr - buf) << '\n';
  }
}

}  // namespace dmpfem
