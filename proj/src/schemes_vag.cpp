#include <cmath>

#include "gslab/schemes.hpp"
#include "scheme_common.hpp"

namespace gslab {

// Affine reconstruction on the sub-triangulation {(x_K, v, v') : faces of K},
// with dofs at cell centres and mesh vertices, then mass-lumped onto
// centre/vertex regions (one third of each sub-triangle goes to each of its
// corners, realised by the barycentric dominance split). In 2D the face point
// of the 3D construction degenerates: faces have no interior point to
// eliminate, so no condensation step exists.
SchemeBuild build_vag2d(const MeshPtr& mesh) {
  const int nc = mesh->n_cells();
  const int nv = mesh->n_vertices();
  const int n_dofs = nc + nv;  // cell centres, then vertices

  std::vector<Vec2> points(n_dofs);
  std::vector<bool> boundary(n_dofs, false);
  for (int k = 0; k < nc; ++k) points[k] = mesh->cell(k).center;
  for (int i = 0; i < nv; ++i) {
    points[nc + i] = mesh->vertex(i);
    boundary[nc + i] = mesh->vertex_on_boundary(i);
  }

  auto layout = std::make_shared<QuadratureLayout>();
  LumpingPartition partition;
  partition.regions_of_dof.resize(n_dofs);
  LleStructure lle;
  std::vector<Triplet> pt, gt;

  for (int k = 0; k < nc; ++k) {
    const Cell& c = mesh->cell(k);
    for (int s : c.faces) {
      const Face& f = mesh->face(s);
      const std::array<Vec2, 3> tri{c.center, mesh->vertex(f.v[0]), mesh->vertex(f.v[1])};
      const std::array<int, 3> dofs{k, nc + f.v[0], nc + f.v[1]};
      const auto gl = detail::barycentric_gradients(tri[0], tri[1], tri[2]);
      const Vec2 g = (tri[0] + tri[1] + tri[2]) / 3.0;

      const int lle_id = int(lle.regions.size());
      // dominance regions of the three corners, two triangles each
      for (int i = 0; i < 3; ++i) {
        const Vec2 m_next = 0.5 * (tri[i] + tri[(i + 1) % 3]);
        const Vec2 m_prev = 0.5 * (tri[i] + tri[(i + 2) % 3]);
        const int r = layout->add_region(k, {{tri[i], m_next, g}, {tri[i], g, m_prev}}, 7);
        layout->regions()[r].lle_region = lle_id;
        partition.regions_of_dof[dofs[i]].push_back(r);
        const QuadRegion& region = layout->regions()[r];
        for (int q = region.first_node; q < region.first_node + region.n_nodes; ++q) {
          const auto lam = detail::barycentric_coords(layout->point(q), tri[0], tri[1], tri[2]);
          for (int j = 0; j < 3; ++j) {
            pt.emplace_back(q, dofs[j], lam[j]);
            gt.emplace_back(2 * q, dofs[j], gl[j].x());
            gt.emplace_back(2 * q + 1, dofs[j], gl[j].y());
          }
        }
      }

      LleRegion reg;
      reg.diam = detail::diameter({tri[0], tri[1], tri[2]});
      Eigen::Matrix2Xd cols(2, 3);
      for (int j = 0; j < 3; ++j) {
        reg.dofs.push_back(dofs[j]);
        reg.dist.push_back(0.0);
        cols.col(j) = gl[j];
      }
      reg.gradient_norm = gradient_matrix_norm(cols, reg.diam);
      lle.regions.push_back(std::move(reg));
    }
  }

  SpMat P(layout->n_nodes(), n_dofs), G(2 * layout->n_nodes(), n_dofs);
  P.setFromTriplets(pt.begin(), pt.end());
  G.setFromTriplets(gt.begin(), gt.end());

  GradientDiscretisation gd("vag2d", mesh, std::move(points), std::move(boundary), layout, layout,
                            std::move(P), std::move(G));
  gd.lle = std::move(lle);

  SchemeBuild out;
  out.gd = mass_lump(gd, partition);
  out.companion = std::move(gd);
  return out;
}

}  // namespace gslab
