#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>

#include "dmpfem/error.hpp"
#include "dmpfem/geometry.hpp"
#include "dmpfem/mesh.hpp"
#include "dmpfem/mesh_io.hpp"
#include "dmpfem/numeric.hpp"

using namespace dmpfem;

namespace {

Mesh reference_triangle() {
  Eigen::MatrixXd v(2, 3);
  v << 0, 1, 0, 0, 0, 1;
  Eigen::MatrixXi c(3, 1);
  c << 0, 1, 2;
  return build_mesh(v, c);
}

Mesh reference_tetrahedron() {
  Eigen::MatrixXd v(3, 4);
  v << 0, 1, 0, 0,  //
      0, 0, 1, 0,   //
      0, 0, 0, 1;
  Eigen::MatrixXi c(4, 1);
  c << 0, 1, 2, 3;
  return build_mesh(v, c);
}

// Two triangles sharing the edge A-B as in the interior-edge figure.
Mesh edge_pair(const Eigen::Vector2d& c, const Eigen::Vector2d& d) {
  Eigen::MatrixXd v(2, 4);
  v.col(0) << 0, 0;  // A
  v.col(1) << 1, 0;  // B
  v.col(2) = c;
  v.col(3) = d;
  Eigen::MatrixXi cells(3, 2);
  cells << 0, 1, 1, 0, 2, 3;
  return build_mesh(v, cells);
}

// Law of cosines, independent of the normal-vector construction.
double vertex_angle(const Eigen::Vector2d& apex, const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
  const double a = (p - apex).norm(), b = (q - apex).norm(), c = (p - q).norm();
  return std::acos((a * a + b * b - c * c) / (2 * a * b));
}

// Dihedral angle along edge (p, q) of a tetrahedron with other vertices r, s:
// angle between the components of r - p and s - p orthogonal to the edge.
double dihedral_by_projection(const Eigen::Vector3d& p, const Eigen::Vector3d& q, const Eigen::Vector3d& r,
                              const Eigen::Vector3d& s) {
  const Eigen::Vector3d e = (q - p).normalized();
  Eigen::Vector3d u = r - p, w = s - p;
  u -= u.dot(e) * e;
  w -= w.dot(e) * e;
  return std::acos(std::clamp(u.dot(w) / (u.norm() * w.norm()), -1.0, 1.0));
}

}  // namespace

TEST_CASE("reference simplices") {
  const Mesh tri = reference_triangle();
  CHECK(tri.cell_measure(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(tri.h() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(tri.boundary_nodes().size() == 3);

  const Mesh tet = reference_tetrahedron();
  CHECK(tet.cell_measure(0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(tet.h() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(tet.boundary_nodes().size() == 4);
}

TEST_CASE("build_mesh errors and orientation") {
  Eigen::MatrixXd v(2, 3);
  v << 0, 1, 0, 0, 0, 1;
  Eigen::MatrixXi cw(3, 1);
  cw << 0, 2, 1;
  const Mesh m = build_mesh(v, cw);
  CHECK(m.cell_measure(0) > 0);
  CHECK(simplex_signed_measure(m.cell_vertices(0)) > 0);

  Eigen::MatrixXi bad(3, 1);
  bad << 0, 1, 5;
  CHECK_THROWS_AS(build_mesh(v, bad), Error);
  try {
    build_mesh(v, bad);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IndexOutOfRange);
  }

  Eigen::MatrixXd line(2, 3);
  line << 0, 1, 2, 0, 0, 0;
  Eigen::MatrixXi c(3, 1);
  c << 0, 1, 2;
  try {
    build_mesh(line, c);
    FAIL("expected DegenerateCell");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateCell);
  }

  // three triangles hanging off one edge
  Eigen::MatrixXd fan(2, 5);
  fan << 0, 1, 0.5, 0.5, 0.2, 0, 0, 1, -1, 2;
  Eigen::MatrixXi three(3, 3);
  three << 0, 0, 0, 1, 1, 1, 2, 3, 4;
  try {
    build_mesh(fan, three);
    FAIL("expected NonManifold");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonManifold);
  }
}

TEST_CASE("two triangles sharing an edge") {
  const Mesh m = edge_pair({0.4, 0.8}, {0.6, -0.7});
  CHECK(m.boundary_nodes().size() == 4);
  const auto edges = interior_edges_2d(m);
  REQUIRE(edges.size() == 1);
  CHECK(edges[0].node_m == 0);
  CHECK(edges[0].node_n == 1);
  const Eigen::Vector2d a(0, 0), b(1, 0), c(0.4, 0.8), d(0.6, -0.7);
  const double alpha = vertex_angle(c, a, b), beta = vertex_angle(d, a, b);
  std::multiset<double> got{edges[0].opposite_angles[0], edges[0].opposite_angles[1]};
  CHECK(*got.begin() == doctest::Approx(std::min(alpha, beta)).epsilon(1e-12));
  CHECK(*got.rbegin() == doctest::Approx(std::max(alpha, beta)).epsilon(1e-12));

  CHECK(interior_edges_2d(reference_triangle()).empty());
  CHECK_THROWS_AS(interior_edges_2d(reference_tetrahedron()), Error);
}

TEST_CASE("structured 2D generator") {
  const Mesh one = generate_structured_2d(1, 1);
  CHECK(one.num_cells() == 2);
  for (Eigen::Index c = 0; c < 2; ++c) {
    std::multiset<double> angles;
    for (const auto& a : element_angles(one, c)) angles.insert(a.angle);
    auto it = angles.begin();
    CHECK(*it++ == doctest::Approx(kPi / 4).epsilon(1e-14));
    CHECK(*it++ == doctest::Approx(kPi / 4).epsilon(1e-14));
    CHECK(*it == doctest::Approx(kPi / 2).epsilon(1e-14));
  }

  const Mesh m44 = generate_structured_2d(4, 4);
  CHECK(m44.num_cells() == 2 * 4 * 4);
  CHECK(m44.num_vertices() == 5 * 5);
  const auto audit = acuteness_audit(m44, 0.0);
  CHECK(audit.max_angle == doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK(audit.classification == AngleClass::NonObtuse);
  CHECK(audit.gamma_fit == 0.0);
  CHECK(m44.total_measure() == doctest::Approx(1.0).epsilon(1e-14));

  // (2,2) mesh: interior edges by Euler count E_int = E - E_boundary.
  const Mesh m22 = generate_structured_2d(2, 2);
  const long nv = m22.num_vertices(), nc = m22.num_cells();
  const long edges_total = nv + nc - 1;  // Euler: V - E + F = 1 for a disk
  const long boundary_edges = 8;
  CHECK(static_cast<long>(interior_edges_2d(m22).size()) == edges_total - boundary_edges);
  CHECK(interior_edges_2d(m22).size() == 8);

  const Mesh cc = generate_structured_2d(3, 2, Pattern::Crisscross);
  CHECK(cc.num_cells() == 4 * 3 * 2);
  CHECK(cc.num_vertices() == 4 * 3 + 3 * 2);
  // diagonals of non-square lattice cells are not perpendicular
  CHECK(acuteness_audit(cc).classification == AngleClass::Obtuse);
  CHECK(acuteness_audit(generate_structured_2d(3, 3, Pattern::Crisscross)).classification ==
        AngleClass::NonObtuse);
}

TEST_CASE("sheared lattice has an obtuse angle") {
  const Mesh m = generate_structured_2d(2, 2, Pattern::RightDiagonal, 0.6);
  // brute-force scan of vertex angles with the law of cosines
  double worst = 0.0;
  for (Eigen::Index c = 0; c < m.num_cells(); ++c) {
    const Eigen::MatrixXd p = m.cell_vertices(c);
    for (int k = 0; k < 3; ++k)
      worst = std::max(worst, vertex_angle(p.col(k), p.col((k + 1) % 3), p.col((k + 2) % 3)));
  }
  CHECK(worst > kPi / 2);
  const auto audit = acuteness_audit(m);
  CHECK(audit.max_angle == doctest::Approx(worst).epsilon(1e-12));
  CHECK(audit.classification == AngleClass::Obtuse);
  CHECK(audit.gamma_fit < 0);
}

TEST_CASE("element angles") {
  Eigen::MatrixXd v(2, 3);
  v << 0, 1, 0.5, 0, 0, std::sqrt(3.0) / 2;
  Eigen::MatrixXi c(3, 1);
  c << 0, 1, 2;
  for (const auto& a : element_angles(build_mesh(v, c), 0)) CHECK(a.angle == doctest::Approx(kPi / 3).epsilon(1e-14));

  Eigen::MatrixXd reg(3, 4);
  reg << 1, 1, -1, -1,  //
      1, -1, 1, -1,     //
      1, -1, -1, 1;
  Eigen::MatrixXi ct(4, 1);
  ct << 0, 1, 2, 3;
  const Mesh tet = build_mesh(reg, ct);
  for (const auto& a : element_angles(tet, 0)) {
    CHECK(a.angle == doctest::Approx(1.2309594173407747).epsilon(1e-13));
    CHECK(a.angle == doctest::Approx(std::acos(1.0 / 3.0)).epsilon(1e-13));
  }

  // random triangles: normal construction matches the law of cosines, sums to pi
  SplitMix64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd p(2, 3);
    for (int k = 0; k < 6; ++k) p(k % 2, k / 2) = rng.uniform(-1, 1);
    if (std::abs(simplex_signed_measure(p)) < 1e-3) continue;
    const Mesh m = build_mesh(p, c);
    const Eigen::MatrixXd q = m.cell_vertices(0);
    double sum = 0.0;
    for (const auto& a : element_angles(m, 0)) {
      const int apex = 3 - a.i - a.j;
      CHECK(a.angle == doctest::Approx(vertex_angle(q.col(apex), q.col(a.i), q.col(a.j))).epsilon(1e-12));
      sum += a.angle;
    }
    CHECK(sum == doctest::Approx(kPi).epsilon(1e-12));
  }
}

TEST_CASE("Kuhn tetrahedra") {
  const Mesh cube = generate_structured_3d(1, 1, 1);
  CHECK(cube.num_cells() == 6);
  CHECK(cube.num_vertices() == 8);
  CHECK(cube.total_measure() == doctest::Approx(1.0).epsilon(1e-14));
  for (Eigen::Index c = 0; c < cube.num_cells(); ++c) {
    const Eigen::MatrixXd p = cube.cell_vertices(c);
    for (const auto& a : element_angles(cube, c)) {
      // pair (i, j) names the facets; the shared edge joins the other two vertices
      int rest[2], k = 0;
      for (int v = 0; v < 4; ++v)
        if (v != a.i && v != a.j) rest[k++] = v;
      const double oracle = dihedral_by_projection(p.col(rest[0]), p.col(rest[1]), p.col(a.i), p.col(a.j));
      CHECK(a.angle == doctest::Approx(oracle).epsilon(1e-12));
      CHECK(a.angle <= kPi / 2 + kAngleTol);
      const bool known = std::abs(a.angle - kPi / 2) < 1e-12 || std::abs(a.angle - kPi / 3) < 1e-12 ||
                         std::abs(a.angle - kPi / 4) < 1e-12;
      CHECK(known);
    }
  }
  const Mesh m211 = generate_structured_3d(2, 1, 1);
  CHECK(m211.num_cells() == 12);
  CHECK(m211.num_vertices() == 12);
  CHECK(acuteness_audit(generate_structured_3d(2, 2, 2)).classification == AngleClass::NonObtuse);
}

TEST_CASE("equilateral mesh audit") {
  const Mesh m = generate_equilateral_2d(4, 3);
  const auto audit = acuteness_audit(m, 0.0);
  CHECK(audit.classification == AngleClass::Acute);
  CHECK(audit.gamma_fit == doctest::Approx(kPi / 6).epsilon(1e-12));
  const auto audit1 = acuteness_audit(m, 1.0);
  CHECK(audit1.gamma_fit == doctest::Approx(kPi / 6 / m.h()).epsilon(1e-12));
}

TEST_CASE("audit is invariant under rigid motion and scaling") {
  const Mesh base = generate_structured_2d(3, 3, Pattern::RightDiagonal, 0.3);
  const double t = 0.7;
  Eigen::Matrix2d rot;
  rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  Eigen::MatrixXd moved = (3.5 * rot * base.vertices()).colwise() + Eigen::Vector2d(2, -1);
  const Mesh other = build_mesh(moved, base.cells());
  const auto a = acuteness_audit(base), b = acuteness_audit(other);
  CHECK(a.classification == b.classification);
  CHECK(a.max_angle == doctest::Approx(b.max_angle).epsilon(1e-12));
}

TEST_CASE("Minkowski identity for facet normals") {
  SplitMix64 rng(11);
  for (int dim : {2, 3}) {
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::MatrixXd p(dim, dim + 1);
      for (Eigen::Index k = 0; k < p.size(); ++k) p(k) = rng.uniform(-1, 1);
      if (std::abs(simplex_signed_measure(p)) < 1e-3) continue;
      const Eigen::VectorXd sum = facet_normals(p) * facet_measures(p);
      CHECK(sum.norm() < 1e-12);
    }
  }
}

TEST_CASE("macro elements") {
  const Mesh tri = reference_triangle();
  for (const auto& m : macro_elements(tri)) CHECK(m.measure == doctest::Approx(0.5).epsilon(1e-15));

  const Mesh m22 = generate_structured_2d(2, 2);
  // the centre node (1,1) lies on 6 cells of area 1/8
  const auto macros = macro_elements(m22);
  CHECK(macros[4].cells.size() == 6);
  CHECK(macros[4].measure == doctest::Approx(6.0 / 8.0).epsilon(1e-14));

  for (const Mesh& m : {m22, generate_structured_2d(5, 3, Pattern::Crisscross, 0.2)}) {
    const Eigen::VectorXd omega = macro_measures(m);
    CHECK(omega.sum() == doctest::Approx(3.0 * m.total_measure()).epsilon(1e-13));
    CHECK(omega.minCoeff() > 0);
  }
  const Mesh cube = generate_structured_3d(2, 1, 1);
  CHECK(macro_measures(cube).sum() == doctest::Approx(4.0 * cube.total_measure()).epsilon(1e-13));
}

TEST_CASE("mesh JSON round trip") {
  for (const Mesh& m : {generate_structured_2d(3, 2, Pattern::Crisscross, 0.37), generate_structured_3d(1, 2, 1)}) {
    const Mesh back = mesh_from_json(nlohmann::json::parse(mesh_to_json(m).dump()));
    CHECK(back.dim() == m.dim());
    CHECK(back.vertices() == m.vertices());
    CHECK(back.cells() == m.cells());
    CHECK(back.cell_measures() == m.cell_measures());
    CHECK(back.h() == m.h());
    CHECK(std::equal(back.boundary_nodes().begin(), back.boundary_nodes().end(), m.boundary_nodes().begin(),
                     m.boundary_nodes().end()));
  }
  auto doc = mesh_to_json(generate_structured_2d(1, 1));
  doc.erase("boundary_nodes");
  CHECK(mesh_from_json(doc).boundary_nodes().size() == 4);
  doc["boundary_nodes"] = {0, 1};
  CHECK_THROWS_AS(mesh_from_json(doc), Error);
  CHECK_THROWS_AS(mesh_from_json(nlohmann::json::parse(R"({"dim": 2})")), Error);
}

TEST_CASE("VTK writer") {
  const Mesh m = generate_structured_2d(1, 1);
  std::ostringstream os;
  write_vtk(os, m, {{"u", Eigen::VectorXd::LinSpaced(4, 0, 3)}});
  const std::string s = os.str();
  CHECK(s.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
  CHECK(s.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
  CHECK(s.find("CELLS 2 8") != std::string::npos);
  CHECK(s.find("CELL_TYPES 2\n5\n5\n") != std::string::npos);
  CHECK(s.find("POINT_DATA 4\nSCALARS u double 1\nLOOKUP_TABLE default\n") != std::string::npos);

  std::ostringstream os3;
  write_vtk(os3, generate_structured_3d(1, 1, 1));
  CHECK(os3.str().find("CELL_TYPES 6\n10\n") != std::string::npos);
  CHECK_THROWS_AS(write_vtk(os3, m, {{"bad", Eigen::VectorXd::Zero(2)}}), Error);
}
