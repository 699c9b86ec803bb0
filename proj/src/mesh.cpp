#include "dmpfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "dmpfem/error.hpp"
#include "dmpfem/geometry.hpp"
#include "dmpfem/numeric.hpp"

namespace dmpfem {

namespace {

using FacetKey = std::array<int, 3>;

FacetKey facet_key(const Eigen::MatrixXi& cells, Eigen::Index cell, int skip, int dim) {
  FacetKey key{-1, -1, -1};
  int k = 0;
  for (int j = 0; j <= dim; ++j)
    if (j != skip) key[k++] = cells(j, cell);
  std::sort(key.begin(), key.begin() + dim);
  return key;
}

}  // namespace

Eigen::MatrixXd Mesh::cell_vertices(Eigen::Index cell) const {
  Eigen::MatrixXd pts(dim_, dim_ + 1);
  for (int i = 0; i <= dim_; ++i) pts.col(i) = vertices_.col(cells_(i, cell));
  return pts;
}

double Mesh::total_measure() const {
  return pairwise_sum(std::span<const double>(measures_.data(), measures_.size()));
}

Mesh build_mesh(Eigen::MatrixXd vertices, Eigen::MatrixXi cells,
                std::optional<std::vector<int>> boundary_nodes) {
  const auto dim = vertices.rows();
  if (dim != 2 && dim != 3)
    throw Error(ErrorKind::DimensionMismatch, "mesh dimension must be 2 or 3");
  if (cells.rows() != dim + 1)
    throw Error(ErrorKind::DimensionMismatch, "cells must have dim+1 vertices");
  if (cells.cols() == 0) throw Error(ErrorKind::InvalidArgument, "mesh has no cells");

  const auto nv = vertices.cols();
  const auto nc = cells.cols();

  Mesh mesh;
  mesh.dim_ = static_cast<int>(dim);
  mesh.measures_.resize(nc);
  mesh.diameters_.resize(nc);

  for (Eigen::Index c = 0; c < nc; ++c) {
    for (Eigen::Index i = 0; i <= dim; ++i) {
      if (cells(i, c) < 0 || cells(i, c) >= nv)
        throw Error(ErrorKind::IndexOutOfRange,
                    "cell " + std::to_string(c) + " references vertex " + std::to_string(cells(i, c)));
      for (Eigen::Index j = 0; j < i; ++j)
        if (cells(i, c) == cells(j, c))
          throw Error(ErrorKind::DegenerateCell, "cell " + std::to_string(c) + " repeats a vertex");
    }
    Eigen::MatrixXd pts(dim, dim + 1);
    for (Eigen::Index i = 0; i <= dim; ++i) pts.col(i) = vertices.col(cells(i, c));
    double measure = simplex_signed_measure(pts);
    const double diam = simplex_diameter(pts);
    if (std::abs(measure) < 1e-14 * std::pow(diam, static_cast<double>(dim)))
      throw Error(ErrorKind::DegenerateCell, "cell " + std::to_string(c) + " has zero measure");
    if (measure < 0) {
      std::swap(cells(dim - 1, c), cells(dim, c));
      measure = -measure;
    }
    mesh.measures_(c) = measure;
    mesh.diameters_(c) = diam;
  }

  std::map<FacetKey, int> facet_count;
  for (Eigen::Index c = 0; c < nc; ++c)
    for (int skip = 0; skip <= dim; ++skip) {
      const int count = ++facet_count[facet_key(cells, c, skip, static_cast<int>(dim))];
      if (count > 2) throw Error(ErrorKind::NonManifold, "facet shared by more than two cells");
    }

  mesh.on_boundary_.assign(nv, 0);
  for (const auto& [key, count] : facet_count)
    if (count < 2)
      for (int k = 0; k < dim; ++k) mesh.on_boundary_[key[k]] = 1;
  for (Eigen::Index v = 0; v < nv; ++v)
    if (mesh.on_boundary_[v]) mesh.boundary_nodes_.push_back(static_cast<int>(v));

  if (boundary_nodes) {
    std::vector<int> given = *boundary_nodes;
    std::sort(given.begin(), given.end());
    given.erase(std::unique(given.begin(), given.end()), given.end());
    if (given != mesh.boundary_nodes_)
      throw Error(ErrorKind::InvalidArgument, "boundary_nodes does not match mesh topology");
  }

  mesh.node_cells_.assign(nv, {});
  for (Eigen::Index c = 0; c < nc; ++c)
    for (Eigen::Index i = 0; i <= dim; ++i) mesh.node_cells_[cells(i, c)].push_back(static_cast<int>(c));

  mesh.h_ = mesh.diameters_.maxCoeff();
  mesh.vertices_ = std::move(vertices);
  mesh.cells_ = std::move(cells);
  return mesh;
}

Mesh generate_structured_2d(int nx, int ny, Pattern pattern, double skew) {
  if (nx < 1 || ny < 1) throw Error(ErrorKind::InvalidArgument, "nx, ny must be >= 1");
  if (!(skew >= 0.0 && skew < 1.0)) throw Error(ErrorKind::InvalidArgument, "skew must lie in [0, 1)");

  const int lattice = (nx + 1) * (ny + 1);
  const int centers = pattern == Pattern::Crisscross ? nx * ny : 0;
  Eigen::MatrixXd vertices(2, lattice + centers);
  auto place = [&](int col, double x, double y) {
    vertices(0, col) = x + skew * y;
    vertices(1, col) = y;
  };
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) place(id(i, j), double(i) / nx, double(j) / ny);

  const int per_square = pattern == Pattern::Crisscross ? 4 : 2;
  Eigen::MatrixXi cells(3, per_square * nx * ny);
  int c = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
      if (pattern == Pattern::RightDiagonal) {
        cells.col(c++) << v00, v10, v11;
        cells.col(c++) << v00, v11, v01;
      } else {
        const int m = lattice + j * nx + i;
        place(m, (i + 0.5) / nx, (j + 0.5) / ny);
        cells.col(c++) << v00, v10, m;
        cells.col(c++) << v10, v11, m;
        cells.col(c++) << v11, v01, m;
        cells.col(c++) << v01, v00, m;
      }
    }
  return build_mesh(std::move(vertices), std::move(cells));
}

Mesh generate_equilateral_2d(int nx, int ny) {
  if (nx < 1 || ny < 1) throw Error(ErrorKind::InvalidArgument, "nx, ny must be >= 1");
  const double side = 1.0 / nx;
  const double height = side * std::sqrt(3.0) / 2.0;
  Eigen::MatrixXd vertices(2, (nx + 1) * (ny + 1));
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      vertices(0, id(i, j)) = (i + 0.5 * (j % 2)) * side;
      vertices(1, id(i, j)) = j * height;
    }
  Eigen::MatrixXi cells(3, 2 * nx * ny);
  int c = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (j % 2 == 0) {
        cells.col(c++) << id(i, j), id(i + 1, j), id(i, j + 1);
        cells.col(c++) << id(i + 1, j), id(i + 1, j + 1), id(i, j + 1);
      } else {
        cells.col(c++) << id(i, j), id(i + 1, j), id(i + 1, j + 1);
        cells.col(c++) << id(i, j), id(i + 1, j + 1), id(i, j + 1);
      }
    }
  return build_mesh(std::move(vertices), std::move(cells));
}

Mesh generate_structured_3d(int nx, int ny, int nz) {
  if (nx < 1 || ny < 1 || nz < 1) throw Error(ErrorKind::InvalidArgument, "nx, ny, nz must be >= 1");
  auto id = [nx, ny](int i, int j, int k) { return (k * (ny + 1) + j) * (nx + 1) + i; };
  Eigen::MatrixXd vertices(3, (nx + 1) * (ny + 1) * (nz + 1));
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        vertices.col(id(i, j, k)) << double(i) / nx, double(j) / ny, double(k) / nz;

  // Each permutation of the axes gives one path 000 -> 111 along cube edges.
  static constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                       {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  Eigen::MatrixXi cells(4, 6 * nx * ny * nz);
  int c = 0;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        for (const auto& perm : kPerms) {
          int corner[3] = {0, 0, 0};
          cells(0, c) = id(i, j, k);
          for (int s = 0; s < 3; ++s) {
            corner[perm[s]] = 1;
            cells(s + 1, c) = id(i + corner[0], j + corner[1], k + corner[2]);
          }
          ++c;
        }
  return build_mesh(std::move(vertices), std::move(cells));
}

std::vector<PairAngle> element_angles(const Mesh& mesh, Eigen::Index cell) {
  const Eigen::MatrixXd normals = facet_normals(mesh.cell_vertices(cell));
  const int nv = mesh.dim() + 1;
  std::vector<PairAngle> out;
  out.reserve(nv * (nv - 1) / 2);
  for (int i = 0; i < nv; ++i)
    for (int j = i + 1; j < nv; ++j)
      out.push_back({i, j, kPi - angle_between(normals.col(i), normals.col(j))});
  return out;
}

const char* to_string(AngleClass c) {
  switch (c) {
    case AngleClass::Acute: return "acute";
    case AngleClass::NonObtuse: return "non-obtuse";
    case AngleClass::Obtuse: return "obtuse";
  }
  return "unknown";
}

AngleReport acuteness_audit(const Mesh& mesh, double acute_exponent) {
  if (!(acute_exponent >= 0.0)) throw Error(ErrorKind::InvalidArgument, "acute exponent must be >= 0");
  AngleReport report;
  report.acute_exponent = acute_exponent;
  report.h = mesh.h();
  report.max_angle = 0.0;
  report.min_angle = kPi;
  report.cell_angles.reserve(mesh.num_cells());
  const double scale = std::pow(mesh.h(), acute_exponent);
  report.gamma_fit = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < mesh.num_cells(); ++c) {
    auto angles = element_angles(mesh, c);
    for (const auto& a : angles) {
      report.max_angle = std::max(report.max_angle, a.angle);
      report.min_angle = std::min(report.min_angle, a.angle);
      report.gamma_fit = std::min(report.gamma_fit, (kPi / 2 - a.angle) / scale);
    }
    report.max_aspect = std::max(report.max_aspect,
                                 std::pow(mesh.cell_diameter(c), mesh.dim()) / mesh.cell_measure(c));
    report.cell_angles.push_back(std::move(angles));
  }
  if (report.max_angle > kPi / 2 + kAngleTol)
    report.classification = AngleClass::Obtuse;
  else if (report.max_angle < kPi / 2 - kAngleTol)
    report.classification = AngleClass::Acute;
  else
    report.classification = AngleClass::NonObtuse;
  // right angles within tolerance count as gamma = 0, not as rounding noise
  if (std::abs(report.gamma_fit * scale) <= kAngleTol) report.gamma_fit = 0.0;
  return report;
}

std::vector<InteriorEdge> interior_edges_2d(const Mesh& mesh) {
  if (mesh.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "interior edges require a 2D mesh");
  struct Side {
    int cell;
    int opposite_local;
  };
  std::map<std::pair<int, int>, std::vector<Side>> edges;
  const auto& cells = mesh.cells();
  for (Eigen::Index c = 0; c < mesh.num_cells(); ++c)
    for (int k = 0; k < 3; ++k) {
      int a = cells((k + 1) % 3, c), b = cells((k + 2) % 3, c);
      if (a > b) std::swap(a, b);
      edges[{a, b}].push_back({static_cast<int>(c), k});
    }

  std::vector<InteriorEdge> out;
  for (const auto& [key, sides] : edges) {
    if (sides.size() != 2) continue;
    InteriorEdge e;
    e.node_m = key.first;
    e.node_n = key.second;
    for (int s = 0; s < 2; ++s) {
      const int c = sides[s].cell;
      const int k = sides[s].opposite_local;
      e.cells[s] = c;
      e.opposite_nodes[s] = cells(k, c);
      const Eigen::Vector2d apex = mesh.vertices().col(cells(k, c));
      const Eigen::Vector2d u = mesh.vertices().col(e.node_m) - apex;
      const Eigen::Vector2d v = mesh.vertices().col(e.node_n) - apex;
      e.opposite_angles[s] = angle_between(u, v);
    }
    out.push_back(e);
  }
  return out;
}

std::vector<MacroElement> macro_elements(const Mesh& mesh) {
  std::vector<MacroElement> out(mesh.num_vertices());
  for (Eigen::Index v = 0; v < mesh.num_vertices(); ++v) {
    auto& m = out[v];
    m.node = static_cast<int>(v);
    m.cells = mesh.node_cells()[v];
    std::vector<double> parts;
    parts.reserve(m.cells.size());
    for (int c : m.cells) parts.push_back(mesh.cell_measure(c));
    m.measure = pairwise_sum(parts);
  }
  return out;
}

Eigen::VectorXd macro_measures(const Mesh& mesh) {
  Eigen::VectorXd out(mesh.num_vertices());
  const auto macros = macro_elements(mesh);
  for (std::size_t v = 0; v < macros.size(); ++v) out(v) = macros[v].measure;
  return out;
}

}  // namespace dmpfem
