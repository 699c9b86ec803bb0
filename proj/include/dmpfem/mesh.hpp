#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dmpfem {

/// Tolerance (radians) separating acute / non-obtuse / obtuse angles.
inline constexpr double kAngleTol = 1e-10;

/// Conforming simplicial mesh (triangles in 2D, tetrahedra in 3D).
/// Immutable once built; obtain one from build_mesh or a generator.
class Mesh {
 public:
  int dim() const { return dim_; }
  Eigen::Index num_vertices() const { return vertices_.cols(); }
  Eigen::Index num_cells() const { return cells_.cols(); }

  /// dim x num_vertices coordinates.
  const Eigen::MatrixXd& vertices() const { return vertices_; }
  /// (dim+1) x num_cells vertex indices, positively oriented.
  const Eigen::MatrixXi& cells() const { return cells_; }

  Eigen::MatrixXd cell_vertices(Eigen::Index cell) const;

  std::span<const int> boundary_nodes() const { return boundary_nodes_; }
  bool is_boundary(Eigen::Index node) const { return on_boundary_[node] != 0; }

  const Eigen::VectorXd& cell_measures() const { return measures_; }
  double cell_measure(Eigen::Index cell) const { return measures_(cell); }
  double cell_diameter(Eigen::Index cell) const { return diameters_(cell); }
  double total_measure() const;

  /// Mesh size: the largest cell diameter.
  double h() const { return h_; }

  /// Cells incident to each vertex, ascending.
  const std::vector<std::vector<int>>& node_cells() const { return node_cells_; }

 private:
  friend Mesh build_mesh(Eigen::MatrixXd, Eigen::MatrixXi, std::optional<std::vector<int>>);

  int dim_ = 2;
  Eigen::MatrixXd vertices_;
  Eigen::MatrixXi cells_;
  std::vector<int> boundary_nodes_;
  std::vector<char> on_boundary_;
  Eigen::VectorXd measures_;
  Eigen::VectorXd diameters_;
  double h_ = 0.0;
  std::vector<std::vector<int>> node_cells_;
};

/// Validates and builds a mesh. Negatively oriented cells are reordered by
/// swapping their last two vertices. If boundary_nodes is given it must match
/// the set of vertices on facets shared by fewer than two cells.
///
/// Throws Error{IndexOutOfRange, DegenerateCell, NonManifold, InvalidArgument}.
Mesh build_mesh(Eigen::MatrixXd vertices, Eigen::MatrixXi cells,
                std::optional<std::vector<int>> boundary_nodes = std::nullopt);

enum class Pattern { RightDiagonal, Crisscross };

/// Triangulation of the unit square on an nx x ny lattice. A positive skew
/// shears the lattice (x -> x + skew*y), which creates obtuse angles.
Mesh generate_structured_2d(int nx, int ny, Pattern pattern = Pattern::RightDiagonal,
                            double skew = 0.0);

/// Rows of equilateral triangles with side 1/nx; every angle is pi/3.
Mesh generate_equilateral_2d(int nx, int ny);

/// Kuhn subdivision of the unit cube: 6 tetrahedra per lattice cube, all
/// sharing the main diagonal of their cube.
Mesh generate_structured_3d(int nx, int ny, int nz);

/// Angle between two vertices' opposite facets. In 2D this is the ordinary
/// angle of the triangle at the third vertex; in 3D the interior dihedral
/// angle along the edge not touching vertices i and j.
struct PairAngle {
  int i = 0;
  int j = 0;
  double angle = 0.0;
};

/// pi minus the angle between outward facet normals, for every local pair
/// i < j in lexicographic order (3 pairs per triangle, 6 per tetrahedron).
std::vector<PairAngle> element_angles(const Mesh& mesh, Eigen::Index cell);

enum class AngleClass { Acute, NonObtuse, Obtuse };

const char* to_string(AngleClass c);

struct AngleReport {
  std::vector<std::vector<PairAngle>> cell_angles;
  double max_angle = 0.0;
  double min_angle = 0.0;
  AngleClass classification = AngleClass::Acute;
  /// min over cells and pairs of (pi/2 - angle) / h^acute_exponent.
  double gamma_fit = 0.0;
  double acute_exponent = 0.0;
  double h = 0.0;
  /// Largest diameter-to-inradius-like ratio h_T^dim / |T|. Reported only.
  double max_aspect = 0.0;
};

AngleReport acuteness_audit(const Mesh& mesh, double acute_exponent = 0.0);

struct InteriorEdge {
  int node_m = 0;
  int node_n = 0;
  std::array<int, 2> cells{};
  /// Vertex opposite the edge in each adjacent cell.
  std::array<int, 2> opposite_nodes{};
  /// Angles (alpha, beta) at the opposite vertices.
  std::array<double, 2> opposite_angles{};
};

/// Edges shared by exactly two triangles, each listed once with
/// node_m < node_n. Throws DimensionMismatch for 3D meshes.
std::vector<InteriorEdge> interior_edges_2d(const Mesh& mesh);

struct MacroElement {
  int node = 0;
  std::vector<int> cells;
  double measure = 0.0;
};

std::vector<MacroElement> macro_elements(const Mesh& mesh);

/// Vector of |Omega_j| per vertex.
Eigen::VectorXd macro_measures(const Mesh& mesh);

}  // namespace dmpfem
