#include "dmpfem/p1.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "dmpfem/error.hpp"
#include "dmpfem/geometry.hpp"
#include "dmpfem/numeric.hpp"

namespace dmpfem {

ShapeData shape_data(const Mesh& mesh, Eigen::Index cell) {
  const int d = mesh.dim();
  const Eigen::MatrixXd pts = mesh.cell_vertices(cell);
  const Eigen::MatrixXd edges = edge_matrix(pts);
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(edges);
  if (!lu.isInvertible()) throw Error(ErrorKind::DegenerateCell, "singular cell " + std::to_string(cell));

  // Rows of edges^{-1} are the gradients of l_1..l_d.
  const Eigen::MatrixXd inv = lu.inverse();
  ShapeData sd;
  sd.gradients.resize(d, d + 1);
  sd.gradients.rightCols(d) = inv.transpose();
  sd.gradients.col(0) = -sd.gradients.rightCols(d).rowwise().sum();
  sd.gradient_norms = sd.gradients.colwise().norm().transpose();
  sd.normals = facet_normals(pts);
  sd.measure = mesh.cell_measure(cell);
  return sd;
}

double angle_from_gradients(const ShapeData& sd, int i, int j) {
  return kPi - angle_between(sd.gradients.col(i), sd.gradients.col(j));
}

P1Field::P1Field(const Mesh& mesh, Eigen::VectorXd values) : mesh_(&mesh), values_(std::move(values)) {
  if (values_.size() != mesh.num_vertices())
    throw Error(ErrorKind::DimensionMismatch, "field length does not match vertex count");
}

P1Field P1Field::constant(const Mesh& mesh, double value) {
  return P1Field(mesh, Eigen::VectorXd::Constant(mesh.num_vertices(), value));
}

Eigen::VectorXd P1Field::local_values(Eigen::Index cell) const {
  const int nv = mesh_->dim() + 1;
  Eigen::VectorXd local(nv);
  for (int i = 0; i < nv; ++i) local(i) = values_(mesh_->cells()(i, cell));
  return local;
}

double P1Field::eval(Eigen::Index cell, const Eigen::Ref<const Eigen::VectorXd>& bary) const {
  return local_values(cell).dot(bary);
}

Eigen::VectorXd P1Field::gradient(Eigen::Index cell, const ShapeData& sd) const {
  return sd.gradients * local_values(cell);
}

Eigen::VectorXd P1Field::gradient(Eigen::Index cell) const {
  return gradient(cell, shape_data(*mesh_, cell));
}

P1Field interpolate(const Mesh& mesh, const std::function<double(const Eigen::VectorXd&)>& fn) {
  Eigen::VectorXd values(mesh.num_vertices());
  for (Eigen::Index v = 0; v < mesh.num_vertices(); ++v) values(v) = fn(mesh.vertices().col(v));
  return P1Field(mesh, std::move(values));
}

P1Field cut_plus(const P1Field& v, double k) {
  return P1Field(v.mesh(), (v.values().array() - k).max(0.0).matrix());
}

P1Field cut_minus(const P1Field& v, double k) {
  return P1Field(v.mesh(), (v.values().array() - k).min(0.0).matrix());
}

Eigen::VectorXd physical_point(const Mesh& mesh, Eigen::Index cell,
                               const Eigen::Ref<const Eigen::VectorXd>& bary) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(mesh.dim());
  for (int i = 0; i <= mesh.dim(); ++i) x += bary(i) * mesh.vertices().col(mesh.cells()(i, cell));
  return x;
}

double integrate(const Mesh& mesh, const CellIntegrand& fn, const QuadratureRule& rule) {
  if (rule.dim != mesh.dim()) throw Error(ErrorKind::DimensionMismatch, "quadrature rule dimension");
  std::vector<double> per_cell(mesh.num_cells());
  for (Eigen::Index c = 0; c < mesh.num_cells(); ++c) {
    double s = 0.0;
    for (Eigen::Index q = 0; q < rule.size(); ++q) {
      const Eigen::VectorXd bary = rule.points.col(q);
      s += rule.weights(q) * fn(c, physical_point(mesh, c, bary), bary);
    }
    per_cell[c] = s * mesh.cell_measure(c);
  }
  return pairwise_sum(per_cell);
}

double integrate(const Mesh& mesh, const Integrand& fn, const QuadratureRule& rule) {
  return integrate(
      mesh, CellIntegrand([&fn](Eigen::Index, const Eigen::VectorXd& x, const Eigen::VectorXd&) { return fn(x); }),
      rule);
}

namespace {

void check_exponent(double p) {
  if (!(p >= 1.0 && p <= 64.0)) throw Error(ErrorKind::InvalidArgument, "p must lie in [1, 64]");
}

}  // namespace

double lp_norm(const P1Field& v, double p) {
  check_exponent(p);
  const Mesh& mesh = v.mesh();
  const auto rule = quadrature_rule(mesh.dim(), static_cast<int>(std::ceil(p)) + 1);
  const double integral = integrate(
      mesh,
      CellIntegrand([&](Eigen::Index c, const Eigen::VectorXd&, const Eigen::VectorXd& bary) {
        return std::pow(std::abs(v.eval(c, bary)), p);
      }),
      rule);
  return std::pow(integral, 1.0 / p);
}

double discrete_lp(const P1Field& v, double p) {
  check_exponent(p);
  const Eigen::VectorXd omega = macro_measures(v.mesh());
  std::vector<double> terms(omega.size());
  for (Eigen::Index j = 0; j < omega.size(); ++j) terms[j] = std::pow(std::abs(v[j]), p) * omega(j);
  return std::pow(pairwise_sum(terms), 1.0 / p);
}

void write_field_csv(std::ostream& os, const P1Field& field) {
  const Mesh& mesh = field.mesh();
  os << "node_index,x,y";
  if (mesh.dim() == 3) os << ",z";
  os << ",value\n";
  char buf[32];
  auto put = [&](double v) {
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    os.write(buf, res.ptr - buf);
  };
  for (Eigen::Index v = 0; v < mesh.num_vertices(); ++v) {
    os << v;
    for (int d = 0; d < mesh.dim(); ++d) {
      os << ',';
      put(mesh.vertices()(d, v));
    }
    os << ',';
    put(field[v]);
    os << '\n';
  }
}

P1Field read_field_csv(std::istream& is, const Mesh& mesh) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("node_index", 0) != 0)
    throw Error(ErrorKind::ParseError, "field CSV: missing header");
  Eigen::VectorXd values = Eigen::VectorXd::Constant(mesh.num_vertices(), std::nan(""));
  Eigen::Index rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    if (cols.size() != static_cast<std::size_t>(mesh.dim() + 2))
      throw Error(ErrorKind::ParseError, "field CSV: wrong column count");
    long node = -1;
    double value = 0.0;
    auto r1 = std::from_chars(cols.front().data(), cols.front().data() + cols.front().size(), node);
    auto r2 = std::from_chars(cols.back().data(), cols.back().data() + cols.back().size(), value);
    if (r1.ec != std::errc() || r2.ec != std::errc())
      throw Error(ErrorKind::ParseError, "field CSV: bad number in row " + std::to_string(rows + 1));
    if (node < 0 || node >= mesh.num_vertices())
      throw Error(ErrorKind::IndexOutOfRange, "field CSV: node index " + std::to_string(node));
    values(node) = value;
    ++rows;
  }
  if (rows != mesh.num_vertices() || values.hasNaN())
    throw Error(ErrorKind::ParseError, "field CSV: expected one row per vertex");
  return P1Field(mesh, std::move(values));
}

}  // namespace dmpfem
