#include "dmpfem/quadrature.hpp"

#include <cmath>
#include <vector>

#include "dmpfem/error.hpp"

namespace dmpfem {

namespace {

struct Builder {
  int dim;
  std::vector<Eigen::VectorXd> pts;
  std::vector<double> w;

  void add(Eigen::VectorXd bary, double weight) {
    pts.push_back(std::move(bary));
    w.push_back(weight);
  }

  // Orbit of (a, b, b[, b]): dim+1 points.
  void orbit_a_bbb(double a, double weight) {
    const double b = (1.0 - a) / dim;
    for (int i = 0; i <= dim; ++i) {
      Eigen::VectorXd p = Eigen::VectorXd::Constant(dim + 1, b);
      p(i) = a;
      add(p, weight);
    }
  }

  // Triangle orbit of (a, b, c) with distinct entries: 6 points.
  void orbit_abc(double a, double b, double weight) {
    const double c = 1.0 - a - b;
    const double v[3] = {a, b, c};
    static constexpr int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                       {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perm) {
      Eigen::VectorXd bary(3);
      bary << v[p[0]], v[p[1]], v[p[2]];
      add(bary, weight);
    }
  }

  // Tetrahedron orbit of (a, a, b, b): 6 points.
  void orbit_aabb(double a, double weight) {
    const double b = 0.5 - a;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        Eigen::VectorXd bary = Eigen::VectorXd::Constant(4, b);
        bary(i) = a;
        bary(j) = a;
        add(bary, weight);
      }
  }

  QuadratureRule finish(int degree) const {
    QuadratureRule rule;
    rule.dim = dim;
    rule.degree = degree;
    rule.points.resize(dim + 1, static_cast<Eigen::Index>(pts.size()));
    rule.weights.resize(static_cast<Eigen::Index>(w.size()));
    for (std::size_t q = 0; q < pts.size(); ++q) {
      rule.points.col(q) = pts[q];
      rule.weights(q) = w[q];
    }
    return rule;
  }
};

QuadratureRule triangle_rule(int degree) {
  Builder b{2, {}, {}};
  if (degree <= 1) {
    b.add(Eigen::Vector3d::Constant(1.0 / 3.0), 1.0);
    return b.finish(1);
  }
  if (degree == 2) {
    b.orbit_a_bbb(2.0 / 3.0, 1.0 / 3.0);
    return b.finish(2);
  }
  if (degree <= 4) {
    // Dunavant, 6 points.
    b.orbit_a_bbb(0.108103018168070, 0.223381589678011);
    b.orbit_a_bbb(0.816847572980459, 0.109951743655322);
    return b.finish(4);
  }
  // Dunavant, 12 points.
  b.orbit_a_bbb(0.501426509658179, 0.116786275726379);
  b.orbit_a_bbb(0.873821971016996, 0.050844906370207);
  b.orbit_abc(0.053145049844817, 0.310352451033784, 0.082851075618374);
  return b.finish(6);
}

QuadratureRule tetrahedron_rule(int degree) {
  Builder b{3, {}, {}};
  if (degree <= 1) {
    b.add(Eigen::Vector4d::Constant(0.25), 1.0);
    return b.finish(1);
  }
  if (degree == 2) {
    b.orbit_a_bbb((5.0 + 3.0 * std::sqrt(5.0)) / 20.0, 0.25);
    return b.finish(2);
  }
  // 14-point rule with positive weights, exact to degree 5.
  b.orbit_a_bbb(1.0 - 3.0 * 0.31088591926330060980, 0.11268792571801585080);
  b.orbit_a_bbb(1.0 - 3.0 * 0.09273525031089122640, 0.07349304311636194955);
  b.orbit_aabb(0.04550370412564964949, 0.04254602077708146644);
  return b.finish(5);
}

}  // namespace

int max_quadrature_degree(int dim) { return dim == 2 ? 6 : 5; }

QuadratureRule quadrature_rule(int dim, int min_degree) {
  if (dim == 2) return triangle_rule(min_degree);
  if (dim == 3) return tetrahedron_rule(min_degree);
  throw Error(ErrorKind::DimensionMismatch, "quadrature supports dim 2 or 3");
}

}  // namespace dmpfem
