#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <optional>
#include <string>
#include <vector>

#include "dmpfem/coefficients.hpp"
#include "dmpfem/mesh.hpp"
#include "dmpfem/p1.hpp"
#include "dmpfem/quadrature.hpp"

namespace dmpfem {

using SparseMatrixCsr = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Degree-2 rule for constant coefficients, degree 4 otherwise.
QuadratureRule default_rule(const Mesh& mesh, const CoefficientSet& coeffs);

/// Element matrices of Q(w; ., .) on one cell, split by term. Entry (m, n)
/// pairs test function l_m with trial function l_n:
///   diffusion(m, n) = int a grad l_n . grad l_m
///   advection(m, n) = int (b . grad l_n) l_m
///   reaction(m, n)  = int c l_n l_m
/// with a, b, c evaluated at eta = w(x_q), p = grad w|_T.
struct LocalForm {
  Eigen::MatrixXd diffusion;
  Eigen::MatrixXd advection;
  Eigen::MatrixXd reaction;
  Eigen::VectorXd load;  ///< int f l_m

  Eigen::MatrixXd total() const { return diffusion + advection + reaction; }
};

LocalForm local_form(const Mesh& mesh, Eigen::Index cell, const P1Field& w, const CoefficientSet& coeffs,
                     const QuadratureRule& rule);

/// Q(w; ., .) with the state w frozen: one LocalForm per cell. Evaluating the
/// form for many (u, v) pairs reuses the element matrices.
class FrozenForm {
 public:
  FrozenForm(const Mesh& mesh, const P1Field& w, const CoefficientSet& coeffs, const QuadratureRule& rule);

  const Mesh& mesh() const { return *mesh_; }
  const LocalForm& local(Eigen::Index cell) const { return locals_[cell]; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(locals_.size()); }

  /// Q(w; u, v) = sum_T v_T^T K_T u_T, reduced pairwise over cells.
  double apply(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

  SparseMatrixCsr matrix() const;
  Eigen::VectorXd load() const;

 private:
  const Mesh* mesh_;
  std::vector<LocalForm> locals_;
};

/// Linearized Galerkin system. Row m is the test function l_m.
struct SparseSystem {
  SparseMatrixCsr matrix;
  Eigen::VectorXd rhs;
  /// Per-node Dirichlet flag and prescribed value (empty before
  /// apply_dirichlet).
  std::vector<char> constrained;
  Eigen::VectorXd prescribed;
  std::vector<std::string> warnings;
};

/// Partial nodal assignment; `assigned[v]` marks nodes with a value.
struct DirichletData {
  std::vector<char> assigned;
  Eigen::VectorXd values;
};

/// Nodal interpolant of g on boundary vertices; interior nodes unassigned.
DirichletData interpolate_boundary(const Mesh& mesh, const CoefficientSet::SourceFn& g);

SparseSystem assemble_q(const Mesh& mesh, const P1Field& w, const CoefficientSet& coeffs,
                        const QuadratureRule& rule);

/// Row replacement plus elimination of known columns. Throws
/// MissingBoundaryValue if a boundary node is unassigned.
SparseSystem apply_dirichlet(const Mesh& mesh, const SparseSystem& system, const DirichletData& bc);

enum class LinearMethod { Auto, Gmres, DenseLu };

struct SolveOptions {
  int picard_max_iter = 100;
  double picard_tol = 1e-10;
  int linear_max_iter = 5000;
  double linear_tol = 1e-12;
  double damping = 1.0;
  int gmres_restart = 30;
  LinearMethod linear_method = LinearMethod::Auto;
  /// Node count up to which Auto uses dense LU.
  Eigen::Index dense_threshold = 500;
  /// Throw PicardDiverged instead of returning an unconverged result.
  bool throw_on_divergence = true;

  void validate() const;
};

struct LinearSolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
  LinearMethod method = LinearMethod::Auto;
};

/// Solves matrix * x = rhs to relative residual linear_tol. GMRES(restart)
/// with Jacobi right preconditioning, or dense LU for small systems.
/// Throws LinearSolveDiverged.
Eigen::VectorXd linear_solve(const SparseSystem& system, const SolveOptions& opts,
                             LinearSolveStats* stats = nullptr,
                             const std::optional<Eigen::VectorXd>& initial_guess = std::nullopt);

struct SolveResult {
  P1Field u_h;
  int picard_iterations = 0;
  double final_update_norm = 0.0;
  double final_linear_residual = 0.0;
  /// Relative Galerkin residual of the returned iterate on free nodes.
  double final_nonlinear_residual = 0.0;
  bool converged = false;
  std::vector<double> update_history;
};

/// Frozen-coefficient fixed-point iteration Q(u^m; u^{m+1}, v) = F(v).
/// The default initial guess is the boundary interpolant extended by zero.
SolveResult picard_solve(const Mesh& mesh, const CoefficientSet& coeffs, const SolveOptions& opts = {},
                         const std::optional<Eigen::VectorXd>& initial_guess = std::nullopt,
                         const std::optional<QuadratureRule>& rule = std::nullopt);

/// Q(w; u, v).
double q_apply(const Mesh& mesh, const P1Field& w, const P1Field& u, const P1Field& v,
               const CoefficientSet& coeffs, const QuadratureRule& rule);

struct ZerothOrderReport {
  double min_value = 0.0;
  bool holds = false;
  bool finite_differences = false;
  std::string note;
};

/// min over quadrature points of c(x, u_h) - div b(x, u_h, grad u_h) / 2.
ZerothOrderReport check_zeroth_order_condition(const Mesh& mesh, const P1Field& u_h, const CoefficientSet& coeffs,
                                               const QuadratureRule& rule);

}  // namespace dmpfem
