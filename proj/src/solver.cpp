#include "dmpfem/solver.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include "dmpfem/error.hpp"
#include "dmpfem/numeric.hpp"

namespace dmpfem {

QuadratureRule default_rule(const Mesh& mesh, const CoefficientSet& coeffs) {
  return quadrature_rule(mesh.dim(), coeffs.constant ? 2 : 4);
}

LocalForm local_form(const Mesh& mesh, Eigen::Index cell, const P1Field& w, const CoefficientSet& coeffs,
                     const QuadratureRule& rule) {
  const int nv = mesh.dim() + 1;
  const ShapeData sd = shape_data(mesh, cell);
  const Eigen::VectorXd wl = w.local_values(cell);
  const Eigen::VectorXd p = sd.gradients * wl;
  const Eigen::MatrixXd stiffness = sd.gradients.transpose() * sd.gradients;

  LocalForm lf;
  lf.diffusion = Eigen::MatrixXd::Zero(nv, nv);
  lf.advection = Eigen::MatrixXd::Zero(nv, nv);
  lf.reaction = Eigen::MatrixXd::Zero(nv, nv);
  lf.load = Eigen::VectorXd::Zero(nv);
  for (Eigen::Index q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd bary = rule.points.col(q);
    const Eigen::VectorXd x = physical_point(mesh, cell, bary);
    const double eta = wl.dot(bary);
    const double weight = rule.weights(q) * sd.measure;
    lf.diffusion += (weight * coeffs.a(x, eta, p)) * stiffness;
    const Eigen::VectorXd b = coeffs.b(x, eta, p);
    lf.advection += weight * bary * (sd.gradients.transpose() * b).transpose();
    lf.reaction += (weight * coeffs.c(x, eta)) * bary * bary.transpose();
    lf.load += (weight * coeffs.f(x)) * bary;
  }
  return lf;
}

FrozenForm::FrozenForm(const Mesh& mesh, const P1Field& w, const CoefficientSet& coeffs,
                       const QuadratureRule& rule)
    : mesh_(&mesh), locals_(mesh.num_cells()) {
  if (rule.dim != mesh.dim()) throw Error(ErrorKind::DimensionMismatch, "quadrature rule dimension");
  parallel_for(locals_.size(), [&](std::size_t c) { locals_[c] = local_form(mesh, c, w, coeffs, rule); });
}

double FrozenForm::apply(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  const int nv = mesh_->dim() + 1;
  const auto& cells = mesh_->cells();
  std::vector<double> parts(locals_.size());
  Eigen::VectorXd ul(nv), vl(nv);
  for (std::size_t c = 0; c < locals_.size(); ++c) {
    for (int i = 0; i < nv; ++i) {
      ul(i) = u(cells(i, c));
      vl(i) = v(cells(i, c));
    }
    parts[c] = vl.dot(locals_[c].total() * ul);
  }
  return pairwise_sum(parts);
}

SparseMatrixCsr FrozenForm::matrix() const {
  const int nv = mesh_->dim() + 1;
  const auto& cells = mesh_->cells();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(locals_.size() * nv * nv);
  for (std::size_t c = 0; c < locals_.size(); ++c) {
    const Eigen::MatrixXd k = locals_[c].total();
    for (int m = 0; m < nv; ++m)
      for (int n = 0; n < nv; ++n) triplets.emplace_back(cells(m, c), cells(n, c), k(m, n));
  }
  SparseMatrixCsr a(mesh_->num_vertices(), mesh_->num_vertices());
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

Eigen::VectorXd FrozenForm::load() const {
  const int nv = mesh_->dim() + 1;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mesh_->num_vertices());
  for (std::size_t c = 0; c < locals_.size(); ++c)
    for (int m = 0; m < nv; ++m) rhs(mesh_->cells()(m, c)) += locals_[c].load(m);
  return rhs;
}

DirichletData interpolate_boundary(const Mesh& mesh, const CoefficientSet::SourceFn& g) {
  DirichletData bc;
  bc.assigned.assign(mesh.num_vertices(), 0);
  bc.values = Eigen::VectorXd::Zero(mesh.num_vertices());
  for (int v : mesh.boundary_nodes()) {
    bc.assigned[v] = 1;
    bc.values(v) = g(mesh.vertices().col(v));
  }
  return bc;
}

SparseSystem assemble_q(const Mesh& mesh, const P1Field& w, const CoefficientSet& coeffs,
                        const QuadratureRule& rule) {
  SparseSystem sys;
  if (!coeffs.constant && rule.degree < 4)
    sys.warnings.push_back("QuadratureDegreeTooLow: non-constant coefficients with a degree " +
                           std::to_string(rule.degree) + " rule");
  const FrozenForm form(mesh, w, coeffs, rule);
  sys.matrix = form.matrix();
  sys.rhs = form.load();
  return sys;
}

SparseSystem apply_dirichlet(const Mesh& mesh, const SparseSystem& system, const DirichletData& bc) {
  const auto n = system.matrix.rows();
  if (static_cast<Eigen::Index>(bc.assigned.size()) != n || bc.values.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "Dirichlet data size");
  for (int v : mesh.boundary_nodes())
    if (!bc.assigned[v]) throw Error(ErrorKind::MissingBoundaryValue, "boundary node " + std::to_string(v));

  SparseSystem out;
  out.warnings = system.warnings;
  out.constrained = bc.assigned;
  out.prescribed = bc.values;
  out.rhs = system.rhs;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(system.matrix.nonZeros());
  for (Eigen::Index r = 0; r < n; ++r) {
    if (bc.assigned[r]) {
      triplets.emplace_back(r, r, 1.0);
      out.rhs(r) = bc.values(r);
      continue;
    }
    for (SparseMatrixCsr::InnerIterator it(system.matrix, r); it; ++it) {
      if (bc.assigned[it.col()])
        out.rhs(r) -= it.value() * bc.values(it.col());
      else
        triplets.emplace_back(r, it.col(), it.value());
    }
  }
  out.matrix.resize(n, n);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

void SolveOptions::validate() const {
  if (picard_max_iter < 0) throw Error(ErrorKind::InvalidArgument, "picard_max_iter must be >= 0");
  if (!(picard_tol > 0) || !(linear_tol > 0)) throw Error(ErrorKind::InvalidArgument, "tolerances must be > 0");
  if (!(damping > 0 && damping <= 1)) throw Error(ErrorKind::InvalidArgument, "damping must lie in (0, 1]");
  if (linear_max_iter < 1 || gmres_restart < 1)
    throw Error(ErrorKind::InvalidArgument, "linear_max_iter and gmres_restart must be >= 1");
}

namespace {

double relative_residual(const SparseMatrixCsr& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b,
                         double bnorm) {
  return (b - a * x).norm() / bnorm;
}

// Restarted GMRES with right Jacobi preconditioning; the Arnoldi residual is
// the true residual, checked again against b - Ax at every restart.
Eigen::VectorXd gmres(const SparseMatrixCsr& a, const Eigen::VectorXd& b, Eigen::VectorXd x,
                      const SolveOptions& opts, LinearSolveStats& stats) {
  const Eigen::Index n = b.size();
  const double bnorm = b.norm();
  Eigen::VectorXd inv_diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = a.coeff(i, i);
    inv_diag(i) = d != 0.0 ? 1.0 / d : 1.0;
  }
  const int m = opts.gmres_restart;
  Eigen::MatrixXd v(n, m + 1);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
  Eigen::VectorXd cs(m), sn(m), g(m + 1);

  int total = 0;
  double res = relative_residual(a, x, b, bnorm);
  while (res > opts.linear_tol && total < opts.linear_max_iter) {
    Eigen::VectorXd r = b - a * x;
    const double beta = r.norm();
    v.col(0) = r / beta;
    g.setZero();
    g(0) = beta;
    h.setZero();
    int k = 0;
    for (; k < m && total < opts.linear_max_iter; ++k) {
      Eigen::VectorXd w = a * inv_diag.cwiseProduct(v.col(k));
      for (int i = 0; i <= k; ++i) {
        h(i, k) = w.dot(v.col(i));
        w -= h(i, k) * v.col(i);
      }
      h(k + 1, k) = w.norm();
      if (h(k + 1, k) > 0) v.col(k + 1) = w / h(k + 1, k);
      for (int i = 0; i < k; ++i) {
        const double t = cs(i) * h(i, k) + sn(i) * h(i + 1, k);
        h(i + 1, k) = -sn(i) * h(i, k) + cs(i) * h(i + 1, k);
        h(i, k) = t;
      }
      const double denom = std::hypot(h(k, k), h(k + 1, k));
      cs(k) = h(k, k) / denom;
      sn(k) = h(k + 1, k) / denom;
      h(k, k) = denom;
      h(k + 1, k) = 0.0;
      g(k + 1) = -sn(k) * g(k);
      g(k) = cs(k) * g(k);
      ++total;
      if (std::abs(g(k + 1)) / bnorm <= opts.linear_tol || h(k, k) == 0.0) {
        ++k;
        break;
      }
    }
    const Eigen::VectorXd y =
        h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    x += inv_diag.cwiseProduct(v.leftCols(k) * y);
    const double previous = res;
    res = relative_residual(a, x, b, bnorm);
    if (!std::isfinite(res) || (res >= previous && k < m)) break;
  }
  stats.iterations = total;
  stats.relative_residual = res;
  return x;
}

Eigen::VectorXd dense_lu(const SparseMatrixCsr& a, const Eigen::VectorXd& b, LinearSolveStats& stats) {
  const Eigen::MatrixXd dense = Eigen::MatrixXd(a);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(dense);
  Eigen::VectorXd x = lu.solve(b);
  // two rounds of iterative refinement
  for (int i = 0; i < 2; ++i) x += lu.solve(b - a * x);
  stats.iterations = 1;
  stats.relative_residual = relative_residual(a, x, b, b.norm());
  return x;
}

}  // namespace

Eigen::VectorXd linear_solve(const SparseSystem& system, const SolveOptions& opts, LinearSolveStats* stats,
                             const std::optional<Eigen::VectorXd>& initial_guess) {
  opts.validate();
  LinearSolveStats local;
  LinearSolveStats& st = stats ? *stats : local;
  const auto n = system.matrix.rows();
  if (system.rhs.size() != n || system.matrix.cols() != n)
    throw Error(ErrorKind::DimensionMismatch, "linear system shape");
  if (system.rhs.norm() == 0.0) {
    st = {0, 0.0, opts.linear_method};
    return Eigen::VectorXd::Zero(n);
  }
  LinearMethod method = opts.linear_method;
  if (method == LinearMethod::Auto) method = n <= opts.dense_threshold ? LinearMethod::DenseLu : LinearMethod::Gmres;
  st.method = method;
  Eigen::VectorXd x;
  if (method == LinearMethod::DenseLu) {
    x = dense_lu(system.matrix, system.rhs, st);
  } else {
    Eigen::VectorXd x0 = initial_guess && initial_guess->size() == n ? *initial_guess : Eigen::VectorXd::Zero(n);
    x = gmres(system.matrix, system.rhs, std::move(x0), opts, st);
  }
  if (!(st.relative_residual <= opts.linear_tol))
    throw Error(ErrorKind::LinearSolveDiverged,
                "relative residual " + std::to_string(st.relative_residual) + " after " +
                    std::to_string(st.iterations) + " iterations");
  return x;
}

namespace {

bool same_system(const SparseSystem& a, const SparseSystem& b) {
  const auto& ma = a.matrix;
  const auto& mb = b.matrix;
  if (ma.nonZeros() != mb.nonZeros() || a.rhs.size() != b.rhs.size()) return false;
  const auto nnz = static_cast<std::size_t>(ma.nonZeros());
  return std::memcmp(ma.valuePtr(), mb.valuePtr(), nnz * sizeof(double)) == 0 &&
         std::memcmp(ma.innerIndexPtr(), mb.innerIndexPtr(), nnz * sizeof(int)) == 0 &&
         std::memcmp(ma.outerIndexPtr(), mb.outerIndexPtr(), (ma.outerSize() + 1) * sizeof(int)) == 0 &&
         a.rhs == b.rhs;
}

double relative_update(const Eigen::VectorXd& next, const Eigen::VectorXd& prev) {
  const double diff = (next - prev).norm();
  if (diff == 0.0) return 0.0;
  return diff / std::max(next.norm(), std::numeric_limits<double>::min());
}

double galerkin_residual(const SparseSystem& sys, const Eigen::VectorXd& u) {
  const Eigen::VectorXd au = sys.matrix * u;
  double r2 = 0.0, b2 = 0.0, a2 = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (sys.constrained[i]) continue;
    r2 += (au(i) - sys.rhs(i)) * (au(i) - sys.rhs(i));
    b2 += sys.rhs(i) * sys.rhs(i);
    a2 += au(i) * au(i);
  }
  if (r2 == 0.0) return 0.0;
  return std::sqrt(r2) / std::max(std::sqrt(std::max(b2, a2)), std::numeric_limits<double>::min());
}

}  // namespace

SolveResult picard_solve(const Mesh& mesh, const CoefficientSet& coeffs, const SolveOptions& opts,
                         const std::optional<Eigen::VectorXd>& initial_guess,
                         const std::optional<QuadratureRule>& rule_in) {
  opts.validate();
  const QuadratureRule rule = rule_in ? *rule_in : default_rule(mesh, coeffs);
  const DirichletData bc = interpolate_boundary(mesh, coeffs.g);

  Eigen::VectorXd u = Eigen::VectorXd::Zero(mesh.num_vertices());
  if (initial_guess) {
    if (initial_guess->size() != mesh.num_vertices())
      throw Error(ErrorKind::DimensionMismatch, "initial guess length");
    u = *initial_guess;
  }
  for (Eigen::Index v = 0; v < u.size(); ++v)
    if (bc.assigned[v]) u(v) = bc.values(v);

  SolveResult result{P1Field(mesh, u)};
  auto fail = [&](const std::string& why) {
    result.u_h = P1Field(mesh, u);
    result.converged = false;
    if (opts.throw_on_divergence) throw Error(ErrorKind::PicardDiverged, why);
    return result;
  };

  SparseSystem sys = apply_dirichlet(mesh, assemble_q(mesh, P1Field(mesh, u), coeffs, rule), bc);
  std::optional<Eigen::VectorXd> cached;  // T(u) when the frozen system did not change
  for (int it = 1; it <= opts.picard_max_iter; ++it) {
    LinearSolveStats stats;
    Eigen::VectorXd sol;
    if (cached) {
      sol = *cached;
    } else {
      sol = linear_solve(sys, opts, &stats, u);
      result.final_linear_residual = stats.relative_residual;
    }
    const Eigen::VectorXd next = u + opts.damping * (sol - u);
    const double update = relative_update(next, u);
    if (!std::isfinite(update)) return fail("non-finite Picard update");
    result.update_history.push_back(update);
    result.picard_iterations = it;

    SparseSystem next_sys = apply_dirichlet(mesh, assemble_q(mesh, P1Field(mesh, next), coeffs, rule), bc);
    const bool frozen_map_unchanged = same_system(sys, next_sys);
    cached.reset();
    if (frozen_map_unchanged) cached = sol;

    u = next;
    sys = std::move(next_sys);
    result.final_update_norm = update;
    // With an unchanged frozen system the next update is damping*(sol - u),
    // known without another solve.
    if (update > opts.picard_tol && frozen_map_unchanged) {
      const double predicted = relative_update(u + opts.damping * (sol - u), u);
      if (predicted <= opts.picard_tol) result.final_update_norm = predicted;
    }
    if (result.final_update_norm <= opts.picard_tol) {
      result.u_h = P1Field(mesh, u);
      result.final_nonlinear_residual = galerkin_residual(sys, u);
      result.converged = true;
      return result;
    }
  }
  result.final_nonlinear_residual = galerkin_residual(sys, u);
  return fail("no convergence after " + std::to_string(opts.picard_max_iter) + " Picard iterations");
}

double q_apply(const Mesh& mesh, const P1Field& w, const P1Field& u, const P1Field& v,
               const CoefficientSet& coeffs, const QuadratureRule& rule) {
  return FrozenForm(mesh, w, coeffs, rule).apply(u.values(), v.values());
}

ZerothOrderReport check_zeroth_order_condition(const Mesh& mesh, const P1Field& u_h, const CoefficientSet& coeffs,
                                               const QuadratureRule& rule) {
  ZerothOrderReport report;
  report.finite_differences = !coeffs.div_b;
  report.note =
      "divergence of b evaluated cell by cell along the P1 state; jump contributions across faces of "
      "grad u_h are not included";
  const int dim = mesh.dim();
  const double delta = 1e-6 * mesh.h();
  double min_value = INFINITY;
  for (Eigen::Index c = 0; c < mesh.num_cells(); ++c) {
    const ShapeData sd = shape_data(mesh, c);
    const Eigen::VectorXd p = u_h.gradient(c, sd);
    for (Eigen::Index q = 0; q < rule.size(); ++q) {
      const Eigen::VectorXd bary = rule.points.col(q);
      const Eigen::VectorXd x = physical_point(mesh, c, bary);
      const double eta = u_h.eval(c, bary);
      double div = 0.0;
      if (coeffs.div_b) {
        div = coeffs.div_b(x, eta, p);
      } else {
        for (int i = 0; i < dim; ++i) {
          Eigen::VectorXd xp = x, xm = x;
          xp(i) += delta;
          xm(i) -= delta;
          div += (coeffs.b(xp, eta + delta * p(i), p)(i) - coeffs.b(xm, eta - delta * p(i), p)(i)) / (2 * delta);
        }
      }
      min_value = std::min(min_value, coeffs.c(x, eta) - 0.5 * div);
    }
  }
  report.min_value = min_value;
  report.holds = min_value >= -1e-10;
  return report;
}

}  // namespace dmpfem
