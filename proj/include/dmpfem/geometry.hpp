#pragma once

// Simplex geometry on dense Eigen blocks. A simplex is passed as a
// dim x (dim+1) matrix whose columns are its vertices.

#include <Eigen/Dense>

#include <cmath>

namespace dmpfem {

inline constexpr double kPi = 3.14159265358979323846;

/// Edge matrix [x1 - x0, ..., xd - x0].
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> edge_matrix(
    const Eigen::MatrixBase<Derived>& pts) {
  const Eigen::Index d = pts.rows();
  return pts.rightCols(d).colwise() - pts.col(0);
}

inline double factorial(Eigen::Index d) { return d == 2 ? 2.0 : (d == 3 ? 6.0 : std::tgamma(d + 1.0)); }

/// Signed area (2D) or volume (3D); positive for counter-clockwise /
/// right-handed vertex order.
template <typename Derived>
typename Derived::Scalar simplex_signed_measure(const Eigen::MatrixBase<Derived>& pts) {
  return edge_matrix(pts).determinant() / factorial(pts.rows());
}

/// Largest pairwise vertex distance.
template <typename Derived>
typename Derived::Scalar simplex_diameter(const Eigen::MatrixBase<Derived>& pts) {
  typename Derived::Scalar diam = 0;
  for (Eigen::Index i = 0; i < pts.cols(); ++i)
    for (Eigen::Index j = i + 1; j < pts.cols(); ++j)
      diam = std::max(diam, (pts.col(i) - pts.col(j)).norm());
  return diam;
}

/// Outward unit normals; column i is the normal of the facet opposite
/// vertex i. Built from facet geometry alone (no shape functions).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> facet_normals(
    const Eigen::MatrixBase<Derived>& pts) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index d = pts.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> normals(d, d + 1);
  for (Eigen::Index i = 0; i <= d; ++i) {
    Eigen::Index others[3];
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j <= d; ++j)
      if (j != i) others[k++] = j;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> n(d);
    if (d == 2) {
      const auto e = (pts.col(others[1]) - pts.col(others[0])).eval();
      n << e(1), -e(0);
    } else {
      const Eigen::Matrix<Scalar, 3, 1> e1 = pts.col(others[1]) - pts.col(others[0]);
      const Eigen::Matrix<Scalar, 3, 1> e2 = pts.col(others[2]) - pts.col(others[0]);
      n = e1.cross(e2);
    }
    n.normalize();
    // orient away from the opposite vertex
    if (n.dot(pts.col(i) - pts.col(others[0])) > 0) n = -n;
    normals.col(i) = n;
  }
  return normals;
}

/// Facet measures (edge lengths in 2D, face areas in 3D); entry i belongs
/// to the facet opposite vertex i.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> facet_measures(
    const Eigen::MatrixBase<Derived>& pts) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index d = pts.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> m(d + 1);
  for (Eigen::Index i = 0; i <= d; ++i) {
    Eigen::Index others[3];
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j <= d; ++j)
      if (j != i) others[k++] = j;
    if (d == 2) {
      m(i) = (pts.col(others[1]) - pts.col(others[0])).norm();
    } else {
      const Eigen::Matrix<Scalar, 3, 1> e1 = pts.col(others[1]) - pts.col(others[0]);
      const Eigen::Matrix<Scalar, 3, 1> e2 = pts.col(others[2]) - pts.col(others[0]);
      m(i) = Scalar(0.5) * e1.cross(e2).norm();
    }
  }
  return m;
}

/// Unsigned angle in [0, pi] between two vectors, via atan2 so that it stays
/// accurate near 0 and pi.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar angle_between(const Eigen::MatrixBase<DerivedA>& a,
                                        const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar dot = a.dot(b);
  Scalar cross;
  if (a.size() == 2) {
    cross = std::abs(a(0) * b(1) - a(1) * b(0));
  } else {
    const Eigen::Matrix<Scalar, 3, 1> a3(a(0), a(1), a(2)), b3(b(0), b(1), b(2));
    cross = a3.cross(b3).norm();
  }
  return std::atan2(cross, dot);
}

}  // namespace dmpfem
