#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dmpfem/coefficients.hpp"
#include "dmpfem/mesh.hpp"
#include "dmpfem/p1.hpp"
#include "dmpfem/quadrature.hpp"
#include "dmpfem/solver.hpp"

namespace dmpfem {

/// Relative tolerance for the ">= 0" verdicts.
inline constexpr double kSignTol = 1e-10;

enum class Verdict { Pass, Fail, NotApplicable };

const char* to_string(Verdict v);

enum class ElementCase {
  Auto,          ///< pick from the local matrices at the frozen state
  GeneralB,      ///< (i)   D_ij >= lambda* |grad l_i| |grad l_j| |T|
  BZeroCNonneg,  ///< (ii)  same inequality, b = 0 and c >= 0 required
  PoissonLike,   ///< (iii) D_ij >= lambda |grad l_i| |grad l_j| cos(alpha_ij) |T|
};

const char* to_string(ElementCase c);
ElementCase element_case_from_string(const std::string& s);

/// Exponents of the bound sup u_h <= k* + C |f|_{L^{pr/((p-1)(r-1))}}.
struct DmpParams {
  double p = 4.0;
  double r = 2.0;
  /// Margin for element cases (i)/(ii); unset means 0.1 * lambda.
  std::optional<double> lambda_star;
  double alpha_exponent = 0.0;
  /// Absolute slack in sup u_h <= k*.
  double bound_tol = 1e-9;
  ElementCase element_case = ElementCase::Auto;

  double q() const { return p / (p - 1.0); }
  /// r / (r - 1); infinite for r = 1.
  double s() const;
  /// p r / ((p - 1)(r - 1)); infinite for r = 1.
  double f_norm_exponent() const;

  /// Throws InvalidParameters unless p > 2 (p < 2d/(d-2) for d > 2) and
  /// 1 <= r < p - 1.
  void validate(int dim) const;
};

/// max over boundary nodes of max(g, 0) (c >= 0) or g (c = 0). Throws
/// UnsupportedCMode for CMode::General and MissingBoundaryValue if a boundary
/// node is unassigned.
double compute_k_star(const Mesh& mesh, const DirichletData& boundary, CMode mode);

/// {k*} plus the distinct nodal values >= k* plus their midpoints, ascending.
std::vector<double> cut_levels(const P1Field& u_h, double k_star);

struct AssumptionSweep {
  std::vector<double> k_values;
  std::vector<double> q_values;
  double min_value = 0.0;
  double scale = 1.0;
  bool satisfied = true;
};

/// Q(u_h; (u_h-k)_-, (u_h-k)_+) over the cut_levels grid.
AssumptionSweep assumption_a_sweep(const Mesh& mesh, const P1Field& u_h, const CoefficientSet& coeffs,
                                   const QuadratureRule& rule, double k_star);

struct ElementPair {
  int cell = 0;
  int i = 0;  ///< local indices
  int j = 0;
  int node_i = 0;
  int node_j = 0;
  double d = 0.0;          ///< D_ij = -int(a grad l_i.grad l_j + b.grad l_i l_j + c l_i l_j)
  double threshold = 0.0;  ///< right-hand side the pair is compared with
  double cos_angle = 0.0;
  std::string reason;
};

struct ElementReport {
  ElementCase element_case = ElementCase::PoissonLike;
  double lambda_star = 0.0;
  Eigen::Index num_pairs = 0;
  Eigen::Index num_failed = 0;
  /// min over pairs of d - threshold.
  double min_margin = 0.0;
  std::vector<char> cell_pass;
  std::vector<ElementPair> offending;
  /// Case prerequisites (b = 0, c = 0 as required) hold on every cell.
  bool requirements_met = true;
  std::string requirement_note;
  bool pass = true;
};

/// Per ordered pair i != j on every cell, with coefficients frozen at w.
ElementReport element_condition_check(const Mesh& mesh, const CoefficientSet& coeffs, const QuadratureRule& rule,
                                      ElementCase which = ElementCase::Auto,
                                      std::optional<double> lambda_star = std::nullopt,
                                      const std::optional<P1Field>& w = std::nullopt);

struct EdgeResult {
  int node_m = 0;
  int node_n = 0;
  /// Two-cell sums with (trial, test) = (m, n) and (n, m).
  double s_mn = 0.0;
  double s_nm = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  /// -sin(alpha+beta) / (2 sin alpha sin beta); NaN unless Poisson.
  double closed_form = 0.0;
  bool closed_form_match = true;
  bool pass = true;
};

struct EdgeReport {
  std::vector<EdgeResult> edges;
  bool poisson = false;
  Eigen::Index num_failed = 0;
  double max_sum = 0.0;
  double max_closed_form_error = 0.0;
  bool pass = true;
};

/// Interior-edge sums of the bilinear form. With `poisson` (default: the
/// coefficient set is the Poisson preset) every sum is also compared with the
/// cotangent closed form. Throws DimensionMismatch for 3D meshes.
EdgeReport edge_condition_check_2d(const Mesh& mesh, const CoefficientSet& coeffs, const QuadratureRule& rule,
                                   const std::optional<P1Field>& w = std::nullopt,
                                   std::optional<bool> poisson = std::nullopt);

/// |G(k)|: total measure of cells with a vertex value strictly above k.
double level_set_measure(const Mesh& mesh, const P1Field& u_h, double k);

struct LevelSetProfile {
  std::vector<double> k;
  std::vector<double> measure;
};

LevelSetProfile level_set_profile(const Mesh& mesh, const P1Field& u_h, const std::vector<double>& levels);

/// phi(s) <= (M / (s - k))^alpha phi(k)^beta for s > k >= k0.
struct DeGiorgiInput {
  double M = 1.0;
  double alpha = 1.0;
  double beta = 2.0;
  double k0 = 0.0;
  std::function<double(double)> phi;
  /// Levels at which the hypothesis is probed (k_tau are added).
  std::vector<double> grid;
};

/// M phi(k0)^((beta-1)/alpha) 2^(beta/(beta-1)). Throws InvalidParameters.
double de_giorgi_rho(const DeGiorgiInput& input);

enum class DeGiorgiStatus { Ok, HypothesisViolated };

struct DeGiorgiReport {
  DeGiorgiStatus status = DeGiorgiStatus::Ok;
  double rho = 0.0;
  double r = 0.0;  ///< 2^(alpha/(beta-1))
  bool hypothesis_holds = true;
  double violation_s = 0.0;
  double violation_k = 0.0;
  bool decay_holds = true;
  int first_decay_violation = -1;
  bool tail_holds = true;
  double phi_tail = 0.0;
  std::vector<double> k_tau;
  std::vector<double> phi_tau;
  std::vector<double> bound_tau;
  std::string note;
};

/// Checks the hypothesis on every grid pair, the decay phi(k_tau) <=
/// phi(k0)/r^tau for tau <= tau_max and phi(k0 + rho) against the tau_max
/// bound. Reports DeGiorgiStatus::HypothesisViolated instead of throwing so
/// the evidence stays available.
DeGiorgiReport de_giorgi_verify(const DeGiorgiInput& input, double rho, int tau_max = 40);

/// Smallest M for which the hypothesis holds on the grid extended by the
/// resulting k_tau points.
double fit_de_giorgi_m(const DeGiorgiInput& input, int tau_max = 40);

struct DmpCertificate {
  double k_star = 0.0;
  double sup_uh = 0.0;
  DmpParams params;
  CMode c_mode = CMode::Nonnegative;

  AngleReport angles;

  bool f_nonpositive = false;
  double h_nu = 0.0;
  bool theorem_3_3_applicable = false;
  bool bound_satisfied = false;
  bool theorem_3_3_holds = false;

  double f_norm = 0.0;
  double f_norm_exponent = 0.0;
  std::optional<double> empirical_C;
  ZerothOrderReport zeroth_order;

  AssumptionSweep assumption;
  ElementReport element_condition;
  std::optional<EdgeReport> edge_condition;
  LevelSetProfile levelset_profile;
  DeGiorgiReport de_giorgi;
  double de_giorgi_m = 0.0;

  Verdict angles_verdict() const;
  Verdict theorem_3_2_verdict() const;
  Verdict theorem_3_3_verdict() const;
  Verdict assumption_verdict() const;
  Verdict element_verdict() const;
  Verdict edge_verdict() const;
  Verdict level_sets_verdict() const;
  Verdict de_giorgi_verdict() const;
};

/// Runs every check on a converged solution. Throws NotConverged otherwise.
DmpCertificate dmp_certificate(const Mesh& mesh, const SolveResult& solve, const CoefficientSet& coeffs,
                               const QuadratureRule& rule, const DmpParams& params = {});

/// (int |f|^e)^(1/e) by the highest tabulated rule; max |f| at quadrature
/// points and vertices for e = infinity.
double source_norm(const Mesh& mesh, const CoefficientSet::SourceFn& f, double exponent);

}  // namespace dmpfem
