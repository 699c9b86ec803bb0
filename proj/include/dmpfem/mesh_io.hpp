#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "dmpfem/mesh.hpp"

namespace dmpfem {

/// {"dim", "vertices", "cells", "boundary_nodes"}.
nlohmann::json mesh_to_json(const Mesh& mesh);
/// Inverse of mesh_to_json; boundary_nodes is optional and recomputed when
/// absent. Throws ParseError on malformed documents.
Mesh mesh_from_json(const nlohmann::json& doc);

void write_mesh_json(const std::string& path, const Mesh& mesh);
Mesh read_mesh_json(const std::string& path);

struct VtkScalars {
  std::string name;
  Eigen::VectorXd values;
};

/// Legacy ASCII VTK unstructured grid (cell type 5 = triangle,
/// 10 = tetrahedron) with optional point and cell scalars.
void write_vtk(std::ostream& os, const Mesh& mesh, const std::vector<VtkScalars>& point_data = {},
               const std::vector<VtkScalars>& cell_data = {}, const std::string& title = "dmpfem");

}  // namespace dmpfem
