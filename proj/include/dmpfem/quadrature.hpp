#pragma once

#include <Eigen/Dense>

namespace dmpfem {

/// Symmetric quadrature rule on the reference simplex. Points are stored as
/// barycentric coordinates ((dim+1) x n); weights sum to one and are scaled
/// by |T| at use.
struct QuadratureRule {
  int dim = 2;
  int degree = 1;
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return weights.size(); }
};

/// Smallest tabulated rule on the dim-simplex with exactness >= min_degree.
/// Triangle tables reach degree 6, tetrahedron tables degree 5; requests
/// above that return the highest available rule.
QuadratureRule quadrature_rule(int dim, int min_degree);

/// Highest polynomial degree available for dim.
int max_quadrature_degree(int dim);

}  // namespace dmpfem
