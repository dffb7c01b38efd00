#include <cmath>

#include "gslab/schemes.hpp"
#include "scheme_common.hpp"

namespace gslab {

using detail::barycentric_gradients;

bool is_simplicial(const PolytopalMesh& mesh) {
  for (const Cell& c : mesh.cells())
    if (c.faces.size() != 3) return false;
  return true;
}

namespace {

// Local description of one triangle: vertex dofs, optional midpoint dofs,
// basis values/gradients at a point.
struct TriangleBasis {
  std::array<Vec2, 3> v;
  std::array<Vec2, 3> grad_lambda;

  explicit TriangleBasis(const PolytopalMesh& mesh, const Cell& c) {
    for (int i = 0; i < 3; ++i) v[i] = mesh.vertex(c.vertices[i]);
    grad_lambda = barycentric_gradients(v[0], v[1], v[2]);
  }

  std::array<double, 3> lambda(const Vec2& x) const {
    return {1.0 + grad_lambda[0].dot(x - v[0]), 1.0 + grad_lambda[1].dot(x - v[1]),
            1.0 + grad_lambda[2].dot(x - v[2])};
  }
};

}  // namespace

SchemeBuild build_p1(const MeshPtr& mesh, int degree, bool lumped) {
  if (!is_simplicial(*mesh))
    throw Error("p1: requires a simplicial mesh (every cell with exactly 3 faces)");
  if (degree != 1 && degree != 2) throw Error("p1: degree must be 1 or 2");
  if (lumped && degree != 1) throw Error("p1: mass lumping only applies to degree 1");

  const int nv = mesh->n_vertices();
  const int nf = mesh->n_faces();
  const int n_dofs = degree == 1 ? nv : nv + nf;

  std::vector<Vec2> points(n_dofs);
  std::vector<bool> boundary(n_dofs, false);
  for (int i = 0; i < nv; ++i) {
    points[i] = mesh->vertex(i);
    boundary[i] = mesh->vertex_on_boundary(i);
  }
  if (degree == 2)
    for (int s = 0; s < nf; ++s) {
      points[nv + s] = mesh->face(s).center;
      boundary[nv + s] = mesh->face(s).boundary();
    }

  auto layout = std::make_shared<QuadratureLayout>();
  LumpingPartition partition;
  partition.regions_of_dof.resize(n_dofs);
  LleStructure lle;
  lle.regions.resize(mesh->n_cells());

  for (int k = 0; k < mesh->n_cells(); ++k) {
    const Cell& c = mesh->cell(k);
    const TriangleBasis tb(*mesh, c);
    if (!lumped) {
      int r = layout->add_region(k, {{tb.v[0], tb.v[1], tb.v[2]}});
      layout->regions()[r].lle_region = k;
    } else {
      // one region per vertex: the part of the cell where its coordinate
      // dominates, split into two triangles through the centroid
      const Vec2 g = (tb.v[0] + tb.v[1] + tb.v[2]) / 3.0;
      for (int i = 0; i < 3; ++i) {
        const Vec2 m_prev = 0.5 * (tb.v[i] + tb.v[(i + 2) % 3]);
        const Vec2 m_next = 0.5 * (tb.v[i] + tb.v[(i + 1) % 3]);
        int r = layout->add_region(k, {{tb.v[i], m_next, g}, {tb.v[i], g, m_prev}}, 7);
        layout->regions()[r].lle_region = k;
        partition.regions_of_dof[c.vertices[i]].push_back(r);
      }
    }

    LleRegion& reg = lle.regions[k];
    reg.diam = c.diameter;
    Eigen::Matrix2Xd cols(2, degree == 1 ? 3 : 6);
    for (int i = 0; i < 3; ++i) {
      reg.dofs.push_back(c.vertices[i]);
      reg.dist.push_back(0.0);
    }
    if (degree == 1) {
      for (int i = 0; i < 3; ++i) cols.col(i) = tb.grad_lambda[i];
      reg.gradient_norm = gradient_matrix_norm(cols, reg.diam);
    } else {
      for (int s : c.faces) {
        reg.dofs.push_back(nv + s);
        reg.dist.push_back(0.0);
      }
      // gradient is affine: its sup over the cell is attained at a vertex
      double norm = 0;
      for (int corner = 0; corner < 3; ++corner) {
        const auto lam = tb.lambda(tb.v[corner]);
        for (int i = 0; i < 3; ++i) cols.col(i) = (4.0 * lam[i] - 1.0) * tb.grad_lambda[i];
        for (int l = 0; l < 3; ++l) {
          const Face& f = mesh->face(c.faces[l]);
          const int i = detail::local_vertex(c, f.v[0]);
          const int j = detail::local_vertex(c, f.v[1]);
          cols.col(3 + l) = 4.0 * (lam[j] * tb.grad_lambda[i] + lam[i] * tb.grad_lambda[j]);
        }
        norm = std::max(norm, gradient_matrix_norm(cols, reg.diam));
      }
      reg.gradient_norm = norm;
    }
  }

  // tabulate basis values and gradients at the layout nodes
  std::vector<Triplet> pt, gt;
  for (int q = 0; q < layout->n_nodes(); ++q) {
    const int k = layout->cell_of(q);
    const Cell& c = mesh->cell(k);
    const TriangleBasis tb(*mesh, c);
    const auto lam = tb.lambda(layout->point(q));
    if (degree == 1) {
      for (int i = 0; i < 3; ++i) {
        pt.emplace_back(q, c.vertices[i], lam[i]);
        gt.emplace_back(2 * q, c.vertices[i], tb.grad_lambda[i].x());
        gt.emplace_back(2 * q + 1, c.vertices[i], tb.grad_lambda[i].y());
      }
    } else {
      for (int i = 0; i < 3; ++i) {
        pt.emplace_back(q, c.vertices[i], lam[i] * (2.0 * lam[i] - 1.0));
        const Vec2 g = (4.0 * lam[i] - 1.0) * tb.grad_lambda[i];
        gt.emplace_back(2 * q, c.vertices[i], g.x());
        gt.emplace_back(2 * q + 1, c.vertices[i], g.y());
      }
      for (int l = 0; l < 3; ++l) {
        const Face& f = mesh->face(c.faces[l]);
        const int i = detail::local_vertex(c, f.v[0]);
        const int j = detail::local_vertex(c, f.v[1]);
        pt.emplace_back(q, nv + c.faces[l], 4.0 * lam[i] * lam[j]);
        const Vec2 g = 4.0 * (lam[j] * tb.grad_lambda[i] + lam[i] * tb.grad_lambda[j]);
        gt.emplace_back(2 * q, nv + c.faces[l], g.x());
        gt.emplace_back(2 * q + 1, nv + c.faces[l], g.y());
      }
    }
  }

  SpMat P(layout->n_nodes(), n_dofs), G(2 * layout->n_nodes(), n_dofs);
  P.setFromTriplets(pt.begin(), pt.end());
  G.setFromTriplets(gt.begin(), gt.end());

  GradientDiscretisation gd(degree == 1 ? "p1" : "p2", mesh, std::move(points),
                            std::move(boundary), layout, layout, std::move(P), std::move(G));
  gd.lle = std::move(lle);

  SchemeBuild out;
  if (lumped) {
    out.gd = mass_lump(gd, partition);
    out.companion = std::move(gd);
  } else {
    out.gd = std::move(gd);
  }
  return out;
}

}  // namespace gslab
