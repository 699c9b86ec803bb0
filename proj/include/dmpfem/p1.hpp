#pragma once

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <string>

#include "dmpfem/mesh.hpp"
#include "dmpfem/quadrature.hpp"

namespace dmpfem {

/// Constant data of the local P1 basis on one cell.
struct ShapeData {
  /// dim x (dim+1); column i is grad l_i.
  Eigen::MatrixXd gradients;
  Eigen::VectorXd gradient_norms;
  /// dim x (dim+1); column i is the outward unit normal of the facet
  /// opposite vertex i.
  Eigen::MatrixXd normals;
  double measure = 0.0;
};

ShapeData shape_data(const Mesh& mesh, Eigen::Index cell);

/// pi minus the angle between grad l_i and grad l_j.
double angle_from_gradients(const ShapeData& sd, int i, int j);

/// Continuous piecewise-linear field given by its nodal values. The mesh must
/// outlive the field.
class P1Field {
 public:
  P1Field(const Mesh& mesh, Eigen::VectorXd values);
  static P1Field constant(const Mesh& mesh, double value);

  const Mesh& mesh() const { return *mesh_; }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }
  double operator[](Eigen::Index node) const { return values_(node); }

  /// Value at barycentric coordinates inside a cell.
  double eval(Eigen::Index cell, const Eigen::Ref<const Eigen::VectorXd>& bary) const;
  /// Gradient on a cell (constant for P1).
  Eigen::VectorXd gradient(Eigen::Index cell) const;
  Eigen::VectorXd gradient(Eigen::Index cell, const ShapeData& sd) const;
  /// Nodal values on the vertices of a cell, in local order.
  Eigen::VectorXd local_values(Eigen::Index cell) const;

 private:
  const Mesh* mesh_;
  Eigen::VectorXd values_;
};

/// Nodal interpolant of a function of position.
P1Field interpolate(const Mesh& mesh, const std::function<double(const Eigen::VectorXd&)>& fn);

/// (v - k)_+ : nodal values max(v(A) - k, 0).
P1Field cut_plus(const P1Field& v, double k);
/// (v - k)_- : nodal values min(v(A) - k, 0).
P1Field cut_minus(const P1Field& v, double k);

/// Physical point of barycentric coordinates in a cell.
Eigen::VectorXd physical_point(const Mesh& mesh, Eigen::Index cell,
                               const Eigen::Ref<const Eigen::VectorXd>& bary);

using Integrand = std::function<double(const Eigen::VectorXd& x)>;
/// Integrand with access to the cell and barycentric coordinates.
using CellIntegrand =
    std::function<double(Eigen::Index cell, const Eigen::VectorXd& x, const Eigen::VectorXd& bary)>;

/// Sum over cells of |T| * sum_q w_q f(x_q), reduced pairwise.
double integrate(const Mesh& mesh, const Integrand& fn, const QuadratureRule& rule);
double integrate(const Mesh& mesh, const CellIntegrand& fn, const QuadratureRule& rule);

/// (int |v|^p)^(1/p) by quadrature of degree >= ceil(p)+1 (capped at the
/// highest tabulated rule). 1 <= p <= 64.
double lp_norm(const P1Field& v, double p);
/// (sum_j |v(A_j)|^p |Omega_j|)^(1/p). 1 <= p <= 64.
double discrete_lp(const P1Field& v, double p);

/// Writes `node_index,x,y[,z],value` rows with round-trip precision.
void write_field_csv(std::ostream& os, const P1Field& field);
/// Reads nodal values written by write_field_csv; node count must match.
P1Field read_field_csv(std::istream& is, const Mesh& mesh);

}  // namespace dmpfem
