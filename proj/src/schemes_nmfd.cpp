#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "gslab/schemes.hpp"
#include "scheme_common.hpp"

namespace gslab {

namespace {

struct NmfdCell {
  std::vector<int> vertices;        // global ids, CCW
  Eigen::VectorXd cell_w;           // omega_K^v, sums to |K|
  std::vector<std::array<int, 2>> face_slot;  // per local face: local vertex ids
  Vec2 center = Vec2::Zero();       // weighted vertex average
  std::vector<double> dist;         // centre-to-face distances w.r.t. center
  Eigen::VectorXd subcell_measure;  // |V_{K,v}|
  Eigen::Matrix2Xd vertex_normals;  // c_v = sum_{faces at v} omega_sigma^v n
};

}  // namespace

SchemeBuild build_nmfd(const MeshPtr& mesh, const std::optional<NmfdWeights>& weights) {
  const int nc = mesh->n_cells();
  const int nv = mesh->n_vertices();

  // resolve weights (defaults: cell |K|/Card(V_K), face |sigma|/2)
  NmfdWeights w;
  if (weights) {
    w = *weights;
    if (int(w.cell.size()) != nc || int(w.face.size()) != mesh->n_faces())
      throw Error("nmfd: weight tables do not conform to the mesh");
  } else {
    w.cell.resize(nc);
    for (int k = 0; k < nc; ++k)
      w.cell[k].assign(mesh->cell(k).vertices.size(),
                       mesh->cell(k).measure / double(mesh->cell(k).vertices.size()));
    w.face.resize(mesh->n_faces());
    for (int s = 0; s < mesh->n_faces(); ++s)
      w.face[s] = {0.5 * mesh->face(s).measure, 0.5 * mesh->face(s).measure};
  }

  // weight axioms
  for (int k = 0; k < nc; ++k) {
    const Cell& c = mesh->cell(k);
    if (w.cell[k].size() != c.vertices.size())
      throw Error("nmfd: cell weight row " + std::to_string(k) + " has wrong length");
    double sum = 0;
    for (double x : w.cell[k]) {
      if (x < 0) throw Error("nmfd: negative cell weight in cell " + std::to_string(k));
      sum += x;
    }
    if (std::abs(sum - c.measure) > 1e-12 * std::max(1.0, c.measure))
      throw Error("nmfd: cell weights of cell " + std::to_string(k) +
                  " do not sum to the cell area");
  }
  for (int s = 0; s < mesh->n_faces(); ++s) {
    const Face& f = mesh->face(s);
    const double w0 = w.face[s][0], w1 = w.face[s][1];
    if (w0 < 0 || w1 < 0) throw Error("nmfd: negative face weight on face " + std::to_string(s));
    if (std::abs(w0 + w1 - f.measure) > 1e-12 * std::max(1.0, f.measure))
      throw Error("nmfd: face weights of face " + std::to_string(s) +
                  " do not sum to the face length");
    const Vec2 moment = w0 * mesh->vertex(f.v[0]) + w1 * mesh->vertex(f.v[1]);
    if ((moment - f.measure * f.center).norm() > 1e-12 * std::max(1.0, f.measure))
      throw Error("nmfd: face weights of face " + std::to_string(s) +
                  " do not reproduce the face midpoint");
  }

  // per-cell data
  std::vector<NmfdCell> cells(nc);
  for (int k = 0; k < nc; ++k) {
    const Cell& c = mesh->cell(k);
    NmfdCell& ck = cells[k];
    ck.vertices = c.vertices;
    const int nvk = int(c.vertices.size());
    ck.cell_w = Eigen::VectorXd::Zero(nvk);
    for (int i = 0; i < nvk; ++i) ck.cell_w[i] = w.cell[k][i];

    // scheme-local centre: weighted vertex average (the mesh centre is not
    // modified)
    ck.center = Vec2::Zero();
    for (int i = 0; i < nvk; ++i) ck.center += ck.cell_w[i] * mesh->vertex(c.vertices[i]);
    ck.center /= c.measure;

    ck.face_slot.resize(c.faces.size());
    ck.dist.resize(c.faces.size());
    ck.vertex_normals = Eigen::Matrix2Xd::Zero(2, nvk);
    ck.subcell_measure = Eigen::VectorXd::Zero(nvk);
    for (std::size_t l = 0; l < c.faces.size(); ++l) {
      const Face& f = mesh->face(c.faces[l]);
      const int side = f.side_of(k);
      const double d = (f.center - ck.center).dot(f.normal[side]);
      if (d <= 0)
        throw Error("nmfd: cell " + std::to_string(k) +
                    " is not star-shaped around its weighted centre");
      ck.dist[l] = d;
      const int i0 = detail::local_vertex(c, f.v[0]);
      const int i1 = detail::local_vertex(c, f.v[1]);
      ck.face_slot[l] = {i0, i1};
      const double ws0 = w.face[c.faces[l]][0];
      const double ws1 = w.face[c.faces[l]][1];
      ck.vertex_normals.col(i0) += ws0 * f.normal[side];
      ck.vertex_normals.col(i1) += ws1 * f.normal[side];
      ck.subcell_measure[i0] += 0.5 * ws0 * d;
      ck.subcell_measure[i1] += 0.5 * ws1 * d;
    }
    // every vertex needs a nonzero face weight, otherwise its gradient
    // region is empty
    for (int i = 0; i < nvk; ++i)
      if (ck.subcell_measure[i] <= 0)
        throw Error("nmfd: cell " + std::to_string(k) +
                    " has a vertex with no nonzero face weight");
  }

  std::vector<Vec2> points(nv);
  std::vector<bool> boundary(nv);
  for (int i = 0; i < nv; ++i) {
    points[i] = mesh->vertex(i);
    boundary[i] = mesh->vertex_on_boundary(i);
  }

  auto pi_layout = std::make_shared<QuadratureLayout>();
  auto grad_layout = std::make_shared<QuadratureLayout>();
  LleStructure lle;
  std::vector<Triplet> pt, gt;

  for (int k = 0; k < nc; ++k) {
    const Cell& c = mesh->cell(k);
    const NmfdCell& ck = cells[k];
    const int nvk = int(c.vertices.size());

    // cell-wise reconstruction: value (1/|K|) sum omega_K^v u_v
    {
      std::vector<std::array<Vec2, 3>> fan;
      for (std::size_t i = 0; i < c.vertices.size(); ++i) {
        const Vec2& a = mesh->vertex(c.vertices[i]);
        const Vec2& b = mesh->vertex(c.vertices[(i + 1) % c.vertices.size()]);
        fan.push_back({c.center, a, b});
      }
      const int r = pi_layout->add_region(k, fan);
      const QuadRegion& region = pi_layout->regions()[r];
      for (int q = region.first_node; q < region.first_node + region.n_nodes; ++q)
        for (int i = 0; i < nvk; ++i)
          pt.emplace_back(q, c.vertices[i], ck.cell_w[i] / c.measure);
    }

    // cell-average gradient coefficients over local vertices
    Eigen::Matrix2Xd grad_cell(2, nvk);
    for (int i = 0; i < nvk; ++i) grad_cell.col(i) = ck.vertex_normals.col(i) / c.measure;

    // residual map R = I - offsets^T grad_cell, offsets = v - x_K
    Eigen::MatrixXd R = Eigen::MatrixXd::Identity(nvk, nvk);
    for (int i = 0; i < nvk; ++i) {
      const Vec2 off = mesh->vertex(c.vertices[i]) - ck.center;
      for (int j = 0; j < nvk; ++j) R(i, j) -= off.dot(grad_cell.col(j));
    }
    Eigen::MatrixXd S = R;  // identity stabilisation

    // differences xi = u_v - u_K: D = I - 1 * cell_w^T / |K|
    Eigen::MatrixXd D = Eigen::MatrixXd::Identity(nvk, nvk);
    for (int i = 0; i < nvk; ++i)
      for (int j = 0; j < nvk; ++j) D(i, j) -= ck.cell_w[j] / c.measure;
    const Eigen::MatrixXd SD = S * D;

    // one gradient region per vertex: the weight-split halves of the
    // adjacent half-diamonds around the weighted centre (their areas add up
    // to the prescribed subcell measures)
    for (int i = 0; i < nvk; ++i) {
      std::vector<std::array<Vec2, 3>> tris;
      for (std::size_t l = 0; l < c.faces.size(); ++l) {
        if (ck.face_slot[l][0] != i && ck.face_slot[l][1] != i) continue;
        const Face& f = mesh->face(c.faces[l]);
        const int slot = (ck.face_slot[l][0] == i) ? 0 : 1;
        const Vec2 a = mesh->vertex(f.v[slot]);
        const Vec2 b = mesh->vertex(f.v[1 - slot]);
        const double t = w.face[c.faces[l]][slot] / f.measure;
        tris.push_back({ck.center, a, a + t * (b - a)});
      }
      const int r = grad_layout->add_region(k, tris);
      grad_layout->regions()[r].lle_region = int(lle.regions.size());

      const double hk = c.diameter;
      const Vec2 Nv = (hk / (2.0 * ck.subcell_measure[i])) * ck.vertex_normals.col(i);
      Eigen::Matrix2Xd coeff(2, nvk);
      for (int j = 0; j < nvk; ++j)
        coeff.col(j) = grad_cell.col(j) + (SD(i, j) / hk) * Nv;

      const QuadRegion& region = grad_layout->regions()[r];
      for (int q = region.first_node; q < region.first_node + region.n_nodes; ++q)
        for (int j = 0; j < nvk; ++j) {
          gt.emplace_back(2 * q, c.vertices[j], coeff(0, j));
          gt.emplace_back(2 * q + 1, c.vertices[j], coeff(1, j));
        }

      LleRegion reg;
      reg.diam = c.diameter;  // safe bound: the subcell sits inside the cell
      for (int j = 0; j < nvk; ++j) {
        reg.dofs.push_back(c.vertices[j]);
        reg.dist.push_back(detail::point_triangles_distance(mesh->vertex(c.vertices[j]), tris));
      }
      reg.gradient_norm = gradient_matrix_norm(coeff, reg.diam);
      lle.regions.push_back(std::move(reg));
    }
  }

  SpMat P(pi_layout->n_nodes(), nv), G(2 * grad_layout->n_nodes(), nv);
  P.setFromTriplets(pt.begin(), pt.end());
  G.setFromTriplets(gt.begin(), gt.end());

  GradientDiscretisation gd("nmfd", mesh, std::move(points), std::move(boundary), pi_layout,
                            grad_layout, std::move(P), std::move(G));
  gd.lle = std::move(lle);
  gd.stabilisation_comparability = 1.0;

  // control: cell value = weighted vertex average, face value = normalised
  // face-weight average
  {
    std::vector<Triplet> phi;
    for (int k = 0; k < nc; ++k) {
      const Cell& c = mesh->cell(k);
      for (std::size_t i = 0; i < c.vertices.size(); ++i)
        phi.emplace_back(k, c.vertices[i], cells[k].cell_w[int(i)] / c.measure);
    }
    for (int s = 0; s < mesh->n_faces(); ++s) {
      const Face& f = mesh->face(s);
      if (f.boundary()) continue;
      phi.emplace_back(nc + s, f.v[0], w.face[s][0] / f.measure);
      phi.emplace_back(nc + s, f.v[1], w.face[s][1] / f.measure);
    }
    SpMat map(nc + mesh->n_faces(), nv);
    map.setFromTriplets(phi.begin(), phi.end());
    gd.control = ControlSpec{mesh, std::move(map)};
  }

  SchemeBuild out;
  out.gd = std::move(gd);
  return out;
}

}  // namespace gslab
