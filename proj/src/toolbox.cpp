#include "gslab/toolbox.hpp"

#include <cmath>

namespace gslab {

void enforce_boundary(const PolytopalMesh& mesh, ToolboxVector& v) {
  for (int s = 0; s < mesh.n_faces(); ++s)
    if (mesh.face(s).boundary()) v.faces[s] = 0.0;
}

bool boundary_ok(const PolytopalMesh& mesh, const ToolboxVector& v, double tol) {
  for (int s = 0; s < mesh.n_faces(); ++s)
    if (mesh.face(s).boundary() && std::abs(v.faces[s]) > tol) return false;
  return true;
}

Eigen::VectorXd toolbox_reconstruction(const PolytopalMesh& mesh, const ToolboxVector& v) {
  if (v.cells.size() != mesh.n_cells() || v.faces.size() != mesh.n_faces())
    throw Error("toolbox_reconstruction: vector does not conform to the mesh");
  return v.cells;
}

Eigen::Matrix2Xd toolbox_gradient(const PolytopalMesh& mesh, const ToolboxVector& v) {
  Eigen::Matrix2Xd g = Eigen::Matrix2Xd::Zero(2, mesh.n_cells());
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const Cell& c = mesh.cell(k);
    Vec2 acc = Vec2::Zero();
    for (int s : c.faces) {
      const Face& f = mesh.face(s);
      acc += f.measure * (v.faces[s] - v.cells[k]) * f.normal[f.side_of(k)];
    }
    g.col(k) = acc / c.measure;
  }
  return g;
}

Eigen::Matrix2Xd toolbox_gradient_face_only(const PolytopalMesh& mesh, const ToolboxVector& v) {
  Eigen::Matrix2Xd g = Eigen::Matrix2Xd::Zero(2, mesh.n_cells());
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const Cell& c = mesh.cell(k);
    Vec2 acc = Vec2::Zero();
    for (int s : c.faces) {
      const Face& f = mesh.face(s);
      acc += f.measure * v.faces[s] * f.normal[f.side_of(k)];
    }
    g.col(k) = acc / c.measure;
  }
  return g;
}

double toolbox_norm(const PolytopalMesh& mesh, const ToolboxVector& v, double p) {
  if (p <= 1.0 || !std::isfinite(p)) throw Error("toolbox_norm: p must lie in (1, inf)");
  if (!boundary_ok(mesh, v)) throw Error("toolbox_norm: nonzero boundary face value");
  double s = 0;
  for (int k = 0; k < mesh.n_cells(); ++k)
    for (int sf : mesh.cell(k).faces) {
      const Face& f = mesh.face(sf);
      const double d = f.dist[f.side_of(k)];
      s += f.measure * d * std::pow(std::abs((v.faces[sf] - v.cells[k]) / d), p);
    }
  return std::pow(s, 1.0 / p);
}

double toolbox_gradient_lp(const PolytopalMesh& mesh, const ToolboxVector& v, double p) {
  const Eigen::Matrix2Xd g = toolbox_gradient(mesh, v);
  double s = 0;
  for (int k = 0; k < mesh.n_cells(); ++k)
    s += mesh.cell(k).measure * std::pow(g.col(k).norm(), p);
  return std::pow(s, 1.0 / p);
}

LayoutPtr cell_layout(const PolytopalMesh& mesh, int degree) {
  auto layout = std::make_shared<QuadratureLayout>();
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const Cell& c = mesh.cell(k);
    std::vector<std::array<Vec2, 3>> tris;
    for (std::size_t i = 0; i < c.vertices.size(); ++i) {
      const Vec2& a = mesh.vertex(c.vertices[i]);
      const Vec2& b = mesh.vertex(c.vertices[(i + 1) % c.vertices.size()]);
      tris.push_back({c.center, a, b});
    }
    layout->add_region(k, tris, degree);
  }
  return layout;
}

double stokes_defect(const PolytopalMesh& mesh, const ToolboxVector& v,
                     const std::function<Vec2(const Vec2&)>& psi,
                     const std::function<double(const Vec2&)>& div_psi, int quad_degree) {
  const Eigen::Matrix2Xd g = toolbox_gradient(mesh, v);
  LayoutPtr layout = cell_layout(mesh, quad_degree);
  double acc = 0;
  for (int q = 0; q < layout->n_nodes(); ++q) {
    const int k = layout->cell_of(q);
    const Vec2 x = layout->point(q);
    const Vec2 psi_x = psi(x);
    const double div_x = div_psi(x);
    if (!std::isfinite(psi_x.x()) || !std::isfinite(psi_x.y()) || !std::isfinite(div_x))
      throw Error("stokes_defect: field not finite at a quadrature node");
    acc += layout->weight(q) * (g.col(k).dot(psi_x) + v.cells[k] * div_x);
  }
  return std::abs(acc);
}

ToolboxVector toolbox_interpolate(const PolytopalMesh& mesh,
                                  const std::function<double(const Vec2&)>& f) {
  ToolboxVector v = ToolboxVector::zero(mesh);
  for (int k = 0; k < mesh.n_cells(); ++k) v.cells[k] = f(mesh.cell(k).center);
  for (int s = 0; s < mesh.n_faces(); ++s)
    v.faces[s] = mesh.face(s).boundary() ? 0.0 : f(mesh.face(s).center);
  return v;
}

ToolboxIndex::ToolboxIndex(const PolytopalMesh& mesh) {
  n_cells = mesh.n_cells();
  face_index.assign(mesh.n_faces(), -1);
  int next = n_cells;
  for (int s = 0; s < mesh.n_faces(); ++s)
    if (!mesh.face(s).boundary()) face_index[s] = next++;
  n_total = next;
}

SpMat toolbox_norm_matrix(const PolytopalMesh& mesh) {
  const ToolboxIndex idx(mesh);
  std::vector<Triplet> trip;
  for (int k = 0; k < mesh.n_cells(); ++k)
    for (int sf : mesh.cell(k).faces) {
      const Face& f = mesh.face(sf);
      const double d = f.dist[f.side_of(k)];
      const double w = f.measure / d;  // |sigma| d (1/d)^2
      const int jk = idx.cell(k);
      const int js = idx.face(sf);
      trip.emplace_back(jk, jk, w);
      if (js >= 0) {
        trip.emplace_back(js, js, w);
        trip.emplace_back(jk, js, -w);
        trip.emplace_back(js, jk, -w);
      }
    }
  SpMat m(idx.n(), idx.n());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SpMat toolbox_mass_matrix(const PolytopalMesh& mesh) {
  const ToolboxIndex idx(mesh);
  std::vector<Triplet> trip;
  for (int k = 0; k < mesh.n_cells(); ++k)
    trip.emplace_back(idx.cell(k), idx.cell(k), mesh.cell(k).measure);
  SpMat m(idx.n(), idx.n());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace gslab
