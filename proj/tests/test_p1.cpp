#include "doctest.h"

#include <cmath>
#include <sstream>

#include "dmpfem/error.hpp"
#include "dmpfem/geometry.hpp"
#include "dmpfem/numeric.hpp"
#include "dmpfem/p1.hpp"

using namespace dmpfem;

namespace {

double factorial_int(int n) { return std::tgamma(n + 1.0); }

// Exact integral of x^a y^b (z^c) over the reference simplex.
double reference_monomial(int a, int b, int c, int dim) {
  if (dim == 2) return factorial_int(a) * factorial_int(b) / factorial_int(a + b + 2);
  return factorial_int(a) * factorial_int(b) * factorial_int(c) / factorial_int(a + b + c + 3);
}

Mesh single_cell(const Eigen::MatrixXd& pts) {
  Eigen::MatrixXi c(pts.cols(), 1);
  for (Eigen::Index i = 0; i < pts.cols(); ++i) c(i, 0) = static_cast<int>(i);
  return build_mesh(pts, c);
}

}  // namespace

TEST_CASE("quadrature exactness on the reference simplex") {
  for (int dim : {2, 3}) {
    for (int degree = 1; degree <= max_quadrature_degree(dim); ++degree) {
      const auto rule = quadrature_rule(dim, degree);
      CHECK(rule.degree >= degree);
      CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(rule.weights.minCoeff() > 0);
      CHECK(rule.points.minCoeff() >= 0);
      const double volume = dim == 2 ? 0.5 : 1.0 / 6.0;
      for (int a = 0; a <= rule.degree; ++a)
        for (int b = 0; a + b <= rule.degree; ++b)
          for (int c = 0; a + b + c <= rule.degree; c += (dim == 3 ? 1 : rule.degree + 1)) {
            double sum = 0.0;
            for (Eigen::Index q = 0; q < rule.size(); ++q) {
              // reference coordinates are barycentric entries 1..dim
              const double x = rule.points(1, q), y = rule.points(2, q);
              const double z = dim == 3 ? rule.points(3, q) : 1.0;
              sum += rule.weights(q) * std::pow(x, a) * std::pow(y, b) * (dim == 3 ? std::pow(z, c) : 1.0);
            }
            const double exact = reference_monomial(a, b, c, dim);
            CHECK_MESSAGE(std::abs(volume * sum - exact) <= 1e-13 * exact,
                          "dim=" << dim << " deg=" << rule.degree << " a=" << a << " b=" << b << " c=" << c);
          }
    }
  }
}

TEST_CASE("shape data") {
  Eigen::MatrixXd ref(2, 3);
  ref << 0, 1, 0, 0, 0, 1;
  const Mesh tri = single_cell(ref);
  const ShapeData sd = shape_data(tri, 0);
  Eigen::MatrixXd expected(2, 3);
  expected << -1, 1, 0, -1, 0, 1;
  CHECK((sd.gradients - expected).norm() < 1e-15);
  CHECK(angle_from_gradients(sd, 1, 2) == doctest::Approx(kPi / 2).epsilon(1e-15));

  Eigen::MatrixXd eq(2, 3);
  eq << 0, 1, 0.5, 0, 0, std::sqrt(3.0) / 2;
  const ShapeData sde = shape_data(single_cell(eq), 0);
  for (int i = 0; i < 3; ++i) CHECK(sde.gradient_norms(i) == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(angle_from_gradients(sde, 0, 2) == doctest::Approx(kPi / 3).epsilon(1e-14));

  SplitMix64 rng(3);
  for (int dim : {2, 3})
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::MatrixXd p(dim, dim + 1);
      for (Eigen::Index k = 0; k < p.size(); ++k) p(k) = rng.uniform(-1, 1);
      if (std::abs(simplex_signed_measure(p)) < 1e-2) continue;
      const Mesh m = single_cell(p);
      const ShapeData s = shape_data(m, 0);
      const Eigen::MatrixXd q = m.cell_vertices(0);
      CHECK(s.gradients.rowwise().sum().norm() < 1e-12);
      // grad l_i = -|grad l_i| n(i)
      for (int i = 0; i <= dim; ++i)
        CHECK((s.gradients.col(i) + s.gradient_norms(i) * s.normals.col(i)).norm() <= 1e-12 * s.gradient_norms(i));
      // l_i(A_j) = delta_ij through the affine representation l_i(x) = [i==0] + grad.(x - A_0)
      for (int i = 0; i <= dim; ++i)
        for (int j = 0; j <= dim; ++j) {
          const double value = (i == 0 ? 1.0 : 0.0) + s.gradients.col(i).dot(q.col(j) - q.col(0));
          CHECK(value == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
        }
      // gradient-route angles agree with normal-route angles
      for (const auto& a : element_angles(m, 0))
        CHECK(angle_from_gradients(s, a.i, a.j) == doctest::Approx(a.angle).epsilon(1e-12));
    }
}

TEST_CASE("partition of unity at random points") {
  const Mesh m = generate_structured_2d(3, 3, Pattern::Crisscross, 0.25);
  SplitMix64 rng(5);
  for (Eigen::Index c = 0; c < m.num_cells(); ++c) {
    const ShapeData sd = shape_data(m, c);
    const Eigen::MatrixXd q = m.cell_vertices(c);
    for (int trial = 0; trial < 100; ++trial) {
      double l1 = rng.uniform(), l2 = rng.uniform();
      if (l1 + l2 > 1) l1 = 1 - l1, l2 = 1 - l2;
      const Eigen::Vector2d x = q.col(0) + l1 * (q.col(1) - q.col(0)) + l2 * (q.col(2) - q.col(0));
      double sum = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double li = (i == 0 ? 1.0 : 0.0) + sd.gradients.col(i).dot(x - q.col(0));
        CHECK(li >= -1e-12);
        CHECK(li <= 1 + 1e-12);
        sum += li;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("cut decomposition") {
  const Mesh m = generate_structured_2d(2, 2);
  const P1Field five = P1Field::constant(m, 5.0);
  CHECK((cut_plus(five, 3).values().array() == 2.0).all());
  CHECK((cut_minus(five, 3).values().array() == 0.0).all());
  const P1Field one = P1Field::constant(m, 1.0);
  CHECK((cut_plus(one, 3).values().array() == 0.0).all());
  CHECK((cut_minus(one, 3).values().array() == -2.0).all());
  CHECK(cut_plus(five, 5)[0] == 0.0);
  CHECK(cut_minus(five, 5)[0] == 0.0);

  SplitMix64 rng(9);
  Eigen::VectorXd vals(m.num_vertices());
  for (Eigen::Index i = 0; i < vals.size(); ++i) vals(i) = rng.uniform(-2, 2);
  const P1Field v(m, vals);
  double previous = INFINITY;
  for (double k = -3; k <= 3; k += 0.125) {
    const P1Field plus = cut_plus(v, k), minus = cut_minus(v, k);
    CHECK(plus.values().minCoeff() >= 0);
    CHECK(minus.values().maxCoeff() <= 0);
    CHECK((plus.values() + minus.values() + Eigen::VectorXd::Constant(vals.size(), k) - vals).norm() < 1e-14);
    if (k >= vals.maxCoeff()) CHECK(plus.values().isZero(0));
    if (k <= vals.minCoeff()) CHECK(minus.values().isZero(0));
    const double norm = lp_norm(plus, 2);
    CHECK(norm <= previous);
    previous = norm;
  }
}

TEST_CASE("integration") {
  const Mesh sq = generate_structured_2d(4, 3, Pattern::Crisscross);
  const auto r2 = quadrature_rule(2, 2);
  CHECK(integrate(sq, [](const Eigen::VectorXd&) { return 1.0; }, r2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(integrate(sq, [](const Eigen::VectorXd& x) { return x(0); }, quadrature_rule(2, 1)) ==
        doctest::Approx(0.5).epsilon(1e-14));

  // local mass entries: exact simplex formula against the degree-6 rule
  SplitMix64 rng(21);
  Eigen::MatrixXd p(2, 3);
  for (Eigen::Index k = 0; k < p.size(); ++k) p(k) = rng.uniform(-1, 1);
  const Mesh cell = single_cell(p);
  const auto r6 = quadrature_rule(2, 6);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double exact = cell.cell_measure(0) * (i == j ? 1.0 / 6.0 : 1.0 / 12.0);
      const double quad = integrate(
          cell,
          CellIntegrand([&](Eigen::Index, const Eigen::VectorXd&, const Eigen::VectorXd& bary) {
            return bary(i) * bary(j);
          }),
          r6);
      CHECK(quad == doctest::Approx(exact).epsilon(1e-14));
    }
}

TEST_CASE("Lp norms") {
  for (const Mesh& m : {generate_structured_2d(3, 3), generate_structured_3d(2, 1, 1)}) {
    const P1Field c = P1Field::constant(m, -1.5);
    for (double p : {1.0, 2.0, 3.5}) {
      CHECK(lp_norm(c, p) == doctest::Approx(1.5 * std::pow(m.total_measure(), 1 / p)).epsilon(1e-12));
      CHECK(discrete_lp(c, p) == doctest::Approx(1.5 * std::pow((m.dim() + 1) * m.total_measure(), 1 / p))
                                     .epsilon(1e-12));
    }
    const P1Field zero = P1Field::constant(m, 0.0);
    CHECK(lp_norm(zero, 2) == 0.0);
    CHECK(discrete_lp(zero, 2) == 0.0);
    CHECK_THROWS_AS(lp_norm(c, 0.5), Error);
    CHECK_THROWS_AS(discrete_lp(c, 65), Error);
  }

  // L2 norm of a P1 field is exact with the degree-2 rule: compare to the
  // element mass matrix route.
  const Mesh m = generate_structured_2d(3, 2, Pattern::Crisscross, 0.1);
  SplitMix64 rng(4);
  Eigen::VectorXd vals(m.num_vertices());
  for (Eigen::Index i = 0; i < vals.size(); ++i) vals(i) = rng.uniform(-1, 1);
  const P1Field v(m, vals);
  double mass = 0.0;
  Eigen::Matrix3d local;
  local << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  for (Eigen::Index c = 0; c < m.num_cells(); ++c) {
    const Eigen::Vector3d lv = v.local_values(c);
    mass += m.cell_measure(c) / 12.0 * lv.dot(local * lv);
  }
  CHECK(lp_norm(v, 2) == doctest::Approx(std::sqrt(mass)).epsilon(1e-13));
}

TEST_CASE("field CSV round trip") {
  const Mesh m = generate_structured_3d(1, 1, 2);
  SplitMix64 rng(12);
  Eigen::VectorXd vals(m.num_vertices());
  for (Eigen::Index i = 0; i < vals.size(); ++i) vals(i) = rng.uniform(-1e3, 1e3) / 7.0;
  std::stringstream ss;
  write_field_csv(ss, P1Field(m, vals));
  CHECK(ss.str().rfind("node_index,x,y,z,value\n", 0) == 0);
  const P1Field back = read_field_csv(ss, m);
  CHECK(back.values() == vals);

  std::stringstream bad("node_index,x,y,value\n0,0,0,1\n");
  CHECK_THROWS_AS(read_field_csv(bad, generate_structured_2d(1, 1)), Error);
}
