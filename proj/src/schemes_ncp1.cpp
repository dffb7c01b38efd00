#include <cmath>

#include "gslab/schemes.hpp"
#include "scheme_common.hpp"

namespace gslab {

// Dofs on face midpoints; on each triangle the basis function of face sigma
// is affine, equal to 1 at the midpoint of sigma and 0 at the other two
// midpoints, i.e. 1 - 2 lambda_v with v the vertex opposite to sigma.
SchemeBuild build_ncp1(const MeshPtr& mesh, bool lumped) {
  if (!is_simplicial(*mesh))
    throw Error("ncp1: requires a simplicial mesh (every cell with exactly 3 faces)");

  const int nf = mesh->n_faces();
  std::vector<Vec2> points(nf);
  std::vector<bool> boundary(nf);
  for (int s = 0; s < nf; ++s) {
    points[s] = mesh->face(s).center;
    boundary[s] = mesh->face(s).boundary();
  }

  auto layout = std::make_shared<QuadratureLayout>();
  LumpingPartition partition;
  partition.regions_of_dof.resize(nf);
  LleStructure lle;
  lle.regions.resize(mesh->n_cells());

  // opposite vertex of each face within a cell
  auto opposite_vertex = [&](const Cell& c, const Face& f) {
    for (int v : c.vertices)
      if (v != f.v[0] && v != f.v[1]) return v;
    throw Error("ncp1: degenerate triangle");
  };

  for (int k = 0; k < mesh->n_cells(); ++k) {
    const Cell& c = mesh->cell(k);
    const Vec2 a = mesh->vertex(c.vertices[0]);
    const Vec2 b = mesh->vertex(c.vertices[1]);
    const Vec2 d = mesh->vertex(c.vertices[2]);
    if (!lumped) {
      int r = layout->add_region(k, {{a, b, d}});
      layout->regions()[r].lle_region = k;
    } else {
      // one region per face: the half-diamond cone from the centroid, so the
      // lumps assemble into the full diamonds around the faces
      for (int s : c.faces) {
        const Face& f = mesh->face(s);
        int r = layout->add_region(
            k, {{c.center, mesh->vertex(f.v[0]), mesh->vertex(f.v[1])}}, 7);
        layout->regions()[r].lle_region = k;
        partition.regions_of_dof[s].push_back(r);
      }
    }

    LleRegion& reg = lle.regions[k];
    reg.diam = c.diameter;
    Eigen::Matrix2Xd cols(2, 3);
    const auto gl = detail::barycentric_gradients(a, b, d);
    for (int l = 0; l < 3; ++l) {
      const int s = c.faces[l];
      reg.dofs.push_back(s);
      reg.dist.push_back(0.0);
      const int iv = detail::local_vertex(c, opposite_vertex(c, mesh->face(s)));
      cols.col(l) = -2.0 * gl[iv];
    }
    reg.gradient_norm = gradient_matrix_norm(cols, reg.diam);
  }

  std::vector<Triplet> pt, gt;
  for (int q = 0; q < layout->n_nodes(); ++q) {
    const int k = layout->cell_of(q);
    const Cell& c = mesh->cell(k);
    const Vec2 a = mesh->vertex(c.vertices[0]);
    const Vec2 b = mesh->vertex(c.vertices[1]);
    const Vec2 d = mesh->vertex(c.vertices[2]);
    const auto gl = detail::barycentric_gradients(a, b, d);
    const auto lam = detail::barycentric_coords(layout->point(q), a, b, d);
    for (int s : c.faces) {
      const int iv = detail::local_vertex(c, opposite_vertex(c, mesh->face(s)));
      pt.emplace_back(q, s, 1.0 - 2.0 * lam[iv]);
      gt.emplace_back(2 * q, s, -2.0 * gl[iv].x());
      gt.emplace_back(2 * q + 1, s, -2.0 * gl[iv].y());
    }
  }
  SpMat P(layout->n_nodes(), nf), G(2 * layout->n_nodes(), nf);
  P.setFromTriplets(pt.begin(), pt.end());
  G.setFromTriplets(gt.begin(), gt.end());

  GradientDiscretisation gd("ncp1", mesh, std::move(points), std::move(boundary), layout, layout,
                            std::move(P), std::move(G));
  gd.lle = std::move(lle);

  // control into the toolbox on the same mesh: cell value = mean of the face
  // values (the reconstruction at the centroid), face value = the face dof
  {
    std::vector<Triplet> phi;
    for (int k = 0; k < mesh->n_cells(); ++k)
      for (int s : mesh->cell(k).faces) phi.emplace_back(k, s, 1.0 / 3.0);
    for (int s = 0; s < nf; ++s)
      if (!mesh->face(s).boundary()) phi.emplace_back(mesh->n_cells() + s, s, 1.0);
    SpMat map(mesh->n_cells() + nf, nf);
    map.setFromTriplets(phi.begin(), phi.end());
    gd.control = ControlSpec{mesh, std::move(map)};
  }

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
