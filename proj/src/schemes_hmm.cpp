#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "gslab/schemes.hpp"
#include "scheme_common.hpp"

namespace gslab {

namespace {

// Per-cell pieces of the hybrid construction, over the local face order.
struct HmmCell {
  Eigen::Matrix2Xd face_vectors;  // |sigma| n_{K,sigma} columns
  Eigen::MatrixXd R;              // residual projection on R^{E_K}
  Eigen::MatrixXd S;              // stabilisation applied to residuals (L o R)
  Eigen::MatrixXd im_basis;       // orthonormal basis of Im(R)
};

HmmCell hmm_cell_operators(const PolytopalMesh& mesh, int k, const Stabilisation& stab,
                           double* zeta_cell) {
  const Cell& c = mesh.cell(k);
  const int nfk = int(c.faces.size());
  HmmCell out;
  out.face_vectors.resize(2, nfk);
  Eigen::Matrix2Xd offsets(2, nfk);  // centre-to-face-midpoint offsets
  Eigen::VectorXd dists(nfk), diamonds(nfk);
  for (int l = 0; l < nfk; ++l) {
    const Face& f = mesh.face(c.faces[l]);
    const int side = f.side_of(k);
    out.face_vectors.col(l) = f.measure * f.normal[side];
    offsets.col(l) = f.center - c.center;
    dists[l] = f.dist[side];
    diamonds[l] = mesh.half_diamond(c.faces[l], side);
  }

  // R = I - offsets' * (face_vectors / |K|): annihilates interpolants of
  // affine maps, projects onto the kernel of the cell-average gradient
  out.R = Eigen::MatrixXd::Identity(nfk, nfk) -
          offsets.transpose() * out.face_vectors / c.measure;

  // orthonormal basis of Im(R) = kernel of xi -> sum |sigma| xi_sigma n
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.face_vectors, Eigen::ComputeFullV);
  out.im_basis = svd.matrixV().rightCols(nfk - 2);

  if (stab.kind == Stabilisation::Identity) {
    out.S = out.R;
    if (zeta_cell) *zeta_cell = 1.0;
    return out;
  }

  // scaled variant: multiply residual entries then project back into Im(R)
  Eigen::MatrixXd scaled = stab.factor * out.R;
  out.S = out.R * scaled;  // R is a projection onto Im(R), so S maps into Im(R)

  // restriction of eta -> R(factor * eta) to Im(R); reject if singular
  const Eigen::MatrixXd& B = out.im_basis;
  Eigen::MatrixXd L_sub = B.transpose() * (out.R * (stab.factor * B));
  Eigen::JacobiSVD<Eigen::MatrixXd> lsvd(L_sub);
  if (lsvd.singularValues().minCoeff() <=
      1e-12 * std::max(1.0, lsvd.singularValues().maxCoeff()))
    throw Error("hmm: stabilisation is not an isomorphism of the residual image in cell " +
                std::to_string(k));

  if (zeta_cell) {
    // two-sided comparability of the stabilised vs raw residual seminorms on
    // Im(R), in the diamond-weighted metric
    Eigen::VectorXd w(nfk);
    for (int l = 0; l < nfk; ++l) w[l] = diamonds[l] / (dists[l] * dists[l]);
    const Eigen::MatrixXd LB = out.R * (stab.factor * B);
    const Eigen::MatrixXd A1 = LB.transpose() * w.asDiagonal() * LB;
    const Eigen::MatrixXd A0 = B.transpose() * w.asDiagonal() * B;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A1, A0,
                                                                 Eigen::EigenvaluesOnly |
                                                                     Eigen::Ax_lBx);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    *zeta_cell = std::max(hi, 1.0 / lo);
  }
  return out;
}

}  // namespace

SchemeBuild build_hmm(const MeshPtr& mesh, const Stabilisation& stab) {
  const int nc = mesh->n_cells();
  const int nf = mesh->n_faces();
  const int n_dofs = nc + nf;  // cells then faces

  std::vector<Vec2> points(n_dofs);
  std::vector<bool> boundary(n_dofs, false);
  for (int k = 0; k < nc; ++k) points[k] = mesh->cell(k).center;
  for (int s = 0; s < nf; ++s) {
    points[nc + s] = mesh->face(s).center;
    boundary[nc + s] = mesh->face(s).boundary();
  }

  auto layout = std::make_shared<QuadratureLayout>();
  LleStructure lle;
  std::vector<Triplet> pt, gt;
  double zeta = 1.0;

  for (int k = 0; k < nc; ++k) {
    const Cell& c = mesh->cell(k);
    const int nfk = int(c.faces.size());
    double zeta_cell = 1.0;
    const HmmCell op = hmm_cell_operators(*mesh, k, stab, &zeta_cell);
    zeta = std::max(zeta, zeta_cell);

    // gradient per dof over the half-diamond of local face l:
    //   cell average part + sqrt(2)/d_l * S(row l) applied to differences
    for (int l = 0; l < nfk; ++l) {
      const Face& f = mesh->face(c.faces[l]);
      const int side = f.side_of(k);
      const std::array<Vec2, 3> diamond{c.center, mesh->vertex(f.v[0]), mesh->vertex(f.v[1])};
      int r = layout->add_region(k, {diamond});
      layout->regions()[r].lle_region = int(lle.regions.size()) + l;

      Eigen::Matrix2Xd face_coeff(2, nfk);
      for (int m = 0; m < nfk; ++m) {
        face_coeff.col(m) = op.face_vectors.col(m) / c.measure +
                            (std::sqrt(2.0) / f.dist[side]) * op.S(l, m) * f.normal[side];
      }
      const QuadRegion& region = layout->regions()[r];
      for (int q = region.first_node; q < region.first_node + region.n_nodes; ++q) {
        pt.emplace_back(q, k, 1.0);
        Vec2 cell_coeff = Vec2::Zero();
        for (int m = 0; m < nfk; ++m) {
          gt.emplace_back(2 * q, nc + c.faces[m], face_coeff(0, m));
          gt.emplace_back(2 * q + 1, nc + c.faces[m], face_coeff(1, m));
          cell_coeff -= face_coeff.col(m);
        }
        gt.emplace_back(2 * q, k, cell_coeff.x());
        gt.emplace_back(2 * q + 1, k, cell_coeff.y());
      }
    }

    // one LLE region per half-diamond; it reads the cell dof and every face
    // dof of the cell
    for (int l = 0; l < nfk; ++l) {
      const Face& f = mesh->face(c.faces[l]);
      const std::array<Vec2, 3> tri{c.center, mesh->vertex(f.v[0]), mesh->vertex(f.v[1])};
      LleRegion reg;
      reg.diam = detail::diameter({tri[0], tri[1], tri[2]});
      reg.dofs.push_back(k);
      reg.dist.push_back(0.0);
      Eigen::Matrix2Xd cols(2, nfk + 1);
      const int side = f.side_of(k);
      for (int m = 0; m < nfk; ++m) {
        reg.dofs.push_back(nc + c.faces[m]);
        reg.dist.push_back(
            detail::point_triangle_distance(mesh->face(c.faces[m]).center, tri[0], tri[1], tri[2]));
        cols.col(m) = op.face_vectors.col(m) / c.measure +
                      (std::sqrt(2.0) / f.dist[side]) * op.S(l, m) * f.normal[side];
      }
      cols.col(nfk) = -cols.leftCols(nfk).rowwise().sum();
      reg.gradient_norm = gradient_matrix_norm(cols, reg.diam);
      lle.regions.push_back(std::move(reg));
    }
  }

  SpMat P(layout->n_nodes(), n_dofs), G(2 * layout->n_nodes(), n_dofs);
  P.setFromTriplets(pt.begin(), pt.end());
  G.setFromTriplets(gt.begin(), gt.end());

  GradientDiscretisation gd("hmm", mesh, std::move(points), std::move(boundary), layout, layout,
                            std::move(P), std::move(G));
  gd.lle = std::move(lle);
  gd.stabilisation_comparability = zeta;

  // piecewise constant on cells: every layout region belongs to its cell dof
  {
    std::vector<int> regions(layout->n_regions());
    for (int r = 0; r < layout->n_regions(); ++r) regions[r] = layout->regions()[r].cell;
    gd.piecewise_constant = std::move(regions);
  }

  // the dof space IS the toolbox space: identity control
  {
    std::vector<Triplet> phi;
    for (int i = 0; i < n_dofs; ++i) phi.emplace_back(i, i, 1.0);
    SpMat map(n_dofs, n_dofs);
    map.setFromTriplets(phi.begin(), phi.end());
    gd.control = ControlSpec{mesh, std::move(map)};
  }

  SchemeBuild out;
  out.gd = std::move(gd);
  return out;
}

SchemeBuild build_sushi(const MeshPtr& mesh, const Stabilisation& stab) {
  SchemeBuild hmm = build_hmm(mesh, stab);
  const CondensationRule rule = sushi_rule(hmm.gd, *mesh);
  CondensedGd condensed = barycentric_condense(hmm.gd, rule);
  SchemeBuild out;
  out.gd = std::move(condensed.gd);
  return out;
}

CondensationRule sushi_rule(const GradientDiscretisation& hmm_gd, const PolytopalMesh& mesh) {
  const int nc = mesh.n_cells();
  CondensationRule rule;
  for (int k = 0; k < nc; ++k) rule.kept.push_back(k);
  for (int s = 0; s < mesh.n_faces(); ++s)
    if (mesh.face(s).boundary()) rule.kept.push_back(nc + s);

  for (int s = 0; s < mesh.n_faces(); ++s) {
    const Face& f = mesh.face(s);
    if (f.boundary()) continue;
    const Vec2 target = f.center;

    // candidate stencils of growing size: the two adjacent cell centres,
    // then every cell centre and boundary face sharing a vertex with them
    std::vector<int> candidates{f.cells[0], f.cells[1]};
    {
      // the pair works only when the midpoint lies on the segment
      const Vec2 a = mesh.cell(f.cells[0]).center;
      const Vec2 b = mesh.cell(f.cells[1]).center;
      const Vec2 d = b - a;
      const double t = (target - a).dot(d) / d.squaredNorm();
      if (t > 1e-12 && t < 1.0 - 1e-12 &&
          (a + t * d - target).norm() <= 1e-12 * std::max(1.0, d.norm())) {
        CondensationRule::Stencil st;
        st.dofs = {f.cells[0], f.cells[1]};
        st.weights = {1.0 - t, t};
        rule.eliminated[nc + s] = std::move(st);
        continue;
      }
    }
    for (int kk : {f.cells[0], f.cells[1]})
      for (int v : mesh.cell(kk).vertices)
        for (int sf : mesh.vertex_faces()[v])
          for (int adj : mesh.face(sf).cells) {
            if (adj < 0) continue;
            if (std::find(candidates.begin(), candidates.end(), adj) == candidates.end())
              candidates.push_back(adj);
            for (int bf : mesh.cell(adj).faces)
              if (mesh.face(bf).boundary() &&
                  std::find(candidates.begin(), candidates.end(), nc + bf) == candidates.end())
                candidates.push_back(nc + bf);
          }

    // minimal-norm weights under the constraints sum w = 1, sum w x = target
    const int m = int(candidates.size());
    Eigen::MatrixXd A(3, m);
    for (int j = 0; j < m; ++j) {
      const Vec2 x = hmm_gd.point(candidates[j]);
      A(0, j) = 1.0;
      A(1, j) = x.x();
      A(2, j) = x.y();
    }
    Eigen::Vector3d b(1.0, target.x(), target.y());
    Eigen::MatrixXd AAt = A * A.transpose();
    Eigen::LDLT<Eigen::MatrixXd> fac(AAt);
    Eigen::VectorXd w = A.transpose() * fac.solve(b);
    if ((A * w - b).norm() > 1e-10)
      throw Error("sushi: no affinely-independent stencil found for face " + std::to_string(s));

    CondensationRule::Stencil st;
    for (int j = 0; j < m; ++j)
      if (std::abs(w[j]) > 1e-14) {
        st.dofs.push_back(candidates[j]);
        st.weights.push_back(w[j]);
      }
    // renormalise the tiny dropped mass
    double wsum = 0;
    for (double x : st.weights) wsum += x;
    for (double& x : st.weights) x /= wsum;
    rule.eliminated[nc + s] = std::move(st);
  }
  return rule;
}

}  // namespace gslab
