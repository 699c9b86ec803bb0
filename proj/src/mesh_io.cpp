#include "dmpfem/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include "dmpfem/error.hpp"

namespace dmpfem {

nlohmann::json mesh_to_json(const Mesh& mesh) {
  nlohmann::json doc;
  doc["dim"] = mesh.dim();
  auto& verts = doc["vertices"] = nlohmann::json::array();
  for (Eigen::Index v = 0; v < mesh.num_vertices(); ++v) {
    auto row = nlohmann::json::array();
    for (int d = 0; d < mesh.dim(); ++d) row.push_back(mesh.vertices()(d, v));
    verts.push_back(std::move(row));
  }
  auto& cells = doc["cells"] = nlohmann::json::array();
  for (Eigen::Index c = 0; c < mesh.num_cells(); ++c) {
    auto row = nlohmann::json::array();
    for (int i = 0; i <= mesh.dim(); ++i) row.push_back(mesh.cells()(i, c));
    cells.push_back(std::move(row));
  }
  doc["boundary_nodes"] = std::vector<int>(mesh.boundary_nodes().begin(), mesh.boundary_nodes().end());
  return doc;
}

Mesh mesh_from_json(const nlohmann::json& doc) {
  try {
    const int dim = doc.at("dim").get<int>();
    if (dim != 2 && dim != 3) throw Error(ErrorKind::ParseError, "dim must be 2 or 3");
    const auto& verts = doc.at("vertices");
    const auto& cells = doc.at("cells");
    Eigen::MatrixXd vertices(dim, verts.size());
    for (std::size_t v = 0; v < verts.size(); ++v) {
      if (verts[v].size() != static_cast<std::size_t>(dim))
        throw Error(ErrorKind::ParseError, "vertex " + std::to_string(v) + " has wrong arity");
      for (int d = 0; d < dim; ++d) vertices(d, v) = verts[v][d].get<double>();
    }
    Eigen::MatrixXi conn(dim + 1, cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].size() != static_cast<std::size_t>(dim + 1))
        throw Error(ErrorKind::ParseError, "cell " + std::to_string(c) + " has wrong arity");
      for (int i = 0; i <= dim; ++i) conn(i, c) = cells[c][i].get<int>();
    }
    std::optional<std::vector<int>> boundary;
    if (doc.contains("boundary_nodes")) boundary = doc["boundary_nodes"].get<std::vector<int>>();
    return build_mesh(std::move(vertices), std::move(conn), std::move(boundary));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("mesh JSON: ") + e.what());
  }
}

void write_mesh_json(const std::string& path, const Mesh& mesh) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + path);
  os << mesh_to_json(mesh).dump(1) << '\n';
}

Mesh read_mesh_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::IoError, "cannot read " + path);
  nlohmann::json doc;
  try {
    is >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
  return mesh_from_json(doc);
}

void write_vtk(std::ostream& os, const Mesh& mesh, const std::vector<VtkScalars>& point_data,
               const std::vector<VtkScalars>& cell_data, const std::string& title) {
  const auto nv = mesh.num_vertices();
  const auto nc = mesh.num_cells();
  const int npc = mesh.dim() + 1;
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << std::setprecision(17);
  os << "POINTS " << nv << " double\n";
  for (Eigen::Index v = 0; v < nv; ++v) {
    os << mesh.vertices()(0, v) << ' ' << mesh.vertices()(1, v) << ' '
       << (mesh.dim() == 3 ? mesh.vertices()(2, v) : 0.0) << '\n';
  }
  os << "CELLS " << nc << ' ' << nc * (npc + 1) << '\n';
  for (Eigen::Index c = 0; c < nc; ++c) {
    os << npc;
    for (int i = 0; i < npc; ++i) os << ' ' << mesh.cells()(i, c);
    os << '\n';
  }
  os << "CELL_TYPES " << nc << '\n';
  const int type = mesh.dim() == 2 ? 5 : 10;
  for (Eigen::Index c = 0; c < nc; ++c) os << type << '\n';

  auto scalars = [&os](const VtkScalars& s, Eigen::Index n) {
    if (s.values.size() != n) throw Error(ErrorKind::DimensionMismatch, "VTK scalar field '" + s.name + "'");
    os << "SCALARS " << s.name << " double 1\nLOOKUP_TABLE default\n";
    for (Eigen::Index i = 0; i < n; ++i) os << s.values(i) << '\n';
  };
  if (!point_data.empty()) {
    os << "POINT_DATA " << nv << '\n';
    for (const auto& s : point_data) scalars(s, nv);
  }
  if (!cell_data.empty()) {
    os << "CELL_DATA " << nc << '\n';
    for (const auto& s : cell_data) scalars(s, nc);
  }
}

}  // namespace dmpfem
