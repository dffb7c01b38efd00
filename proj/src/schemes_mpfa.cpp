#include <cmath>
#include <map>

#include "gslab/schemes.hpp"
#include "scheme_common.hpp"

namespace gslab {

bool is_axis_aligned_cartesian(const PolytopalMesh& mesh) {
  for (const Cell& c : mesh.cells()) {
    if (c.faces.size() != 4) return false;
    for (int s : c.faces) {
      const Face& f = mesh.face(s);
      const Vec2 t = mesh.vertex(f.v[1]) - mesh.vertex(f.v[0]);
      if (std::abs(t.x()) > 1e-12 * t.norm() && std::abs(t.y()) > 1e-12 * t.norm()) return false;
    }
  }
  return true;
}

namespace {

struct SubcellGeometry {
  std::vector<std::array<Vec2, 3>> triangles;
  double measure = 0;
  Vec2 sv_point_for(const PolytopalMesh& mesh, const Face& f, int v, bool cartesian) {
    if (cartesian) return f.center;
    const Vec2 a = mesh.vertex(v);
    const Vec2 b = mesh.vertex(f.v[0] == v ? f.v[1] : f.v[0]);
    return (2.0 * a + b) / 3.0;
  }
};

}  // namespace

SchemeBuild build_mpfa_o(const MeshPtr& mesh) {
  const bool cartesian = is_axis_aligned_cartesian(*mesh);
  const bool simplicial = !cartesian && is_simplicial(*mesh);
  if (!cartesian && !simplicial)
    throw Error("mpfa_o: mesh must be axis-aligned Cartesian or simplicial");

  const int nc = mesh->n_cells();
  const int nf = mesh->n_faces();

  // dofs: cells, then one per (face, vertex) incidence
  const int n_dofs = nc + 2 * nf;
  auto sv_dof = [&](int s, int slot) { return nc + 2 * s + slot; };

  std::vector<Vec2> points(n_dofs);
  std::vector<bool> boundary(n_dofs, false);
  for (int k = 0; k < nc; ++k) points[k] = mesh->cell(k).center;
  for (int s = 0; s < nf; ++s) {
    const Face& f = mesh->face(s);
    for (int slot = 0; slot < 2; ++slot) {
      const int v = f.v[slot];
      Vec2 p;
      if (cartesian)
        p = f.center;  // the approximation points of both slots coincide
      else
        p = (2.0 * mesh->vertex(v) + mesh->vertex(f.v[1 - slot])) / 3.0;
      points[sv_dof(s, slot)] = p;
      boundary[sv_dof(s, slot)] = f.boundary();
    }
  }

  auto layout = std::make_shared<QuadratureLayout>();
  LleStructure lle;
  std::vector<Triplet> pt, gt;
  auto data = std::make_shared<MpfaData>();
  data->cell_dof.resize(nc);

  for (int k = 0; k < nc; ++k) {
    const Cell& c = mesh->cell(k);
    data->cell_dof[k] = k;
    for (int v : c.vertices) {
      // faces of the cell meeting this vertex
      std::vector<int> faces_at_v;
      for (int s : c.faces) {
        const Face& f = mesh->face(s);
        if (f.v[0] == v || f.v[1] == v) faces_at_v.push_back(s);
      }
      if (faces_at_v.size() != 2)
        throw Error("mpfa_o: cell " + std::to_string(k) + " has " +
                    std::to_string(faces_at_v.size()) + " faces at a vertex (expected 2)");

      // subcell geometry
      SubcellGeometry geom;
      const Vec2 xv = mesh->vertex(v);
      const Vec2 m0 = mesh->face(faces_at_v[0]).center;
      const Vec2 m1 = mesh->face(faces_at_v[1]).center;
      geom.triangles = {{xv, m0, c.center}, {xv, c.center, m1}};
      geom.measure = cartesian ? c.measure / 4.0 : c.measure / 3.0;

      MpfaData::Subcell sub;
      sub.cell = k;
      sub.vertex = v;
      sub.measure = geom.measure;
      sub.cell_dof = k;

      // constant gradient on the subcell from the two half-faces
      Eigen::Matrix2Xd cols(2, 2);
      std::vector<int> dof_ids;
      for (std::size_t l = 0; l < faces_at_v.size(); ++l) {
        const int s = faces_at_v[l];
        const Face& f = mesh->face(s);
        const int side = f.side_of(k);
        const int slot = (f.v[0] == v) ? 0 : 1;
        const double sub_len = 0.5 * f.measure;

        MpfaData::SubfaceFlux flux;
        flux.cell = k;
        flux.face = s;
        flux.vertex = v;
        flux.sv_dof = sv_dof(s, slot);
        flux.sub_length = sub_len;
        flux.normal = f.normal[side];
        flux.subcell = int(data->subcells.size());
        sub.flux_ids.push_back(int(data->fluxes.size()));
        data->fluxes.push_back(flux);

        cols.col(int(l)) = (sub_len / geom.measure) * f.normal[side];
        dof_ids.push_back(sv_dof(s, slot));
      }

      const int r = layout->add_region(k, geom.triangles);
      layout->regions()[r].lle_region = int(lle.regions.size());
      sub.region = r;
      const QuadRegion& region = layout->regions()[r];
      for (int q = region.first_node; q < region.first_node + region.n_nodes; ++q) {
        pt.emplace_back(q, k, 1.0);
        Vec2 cell_coeff = Vec2::Zero();
        for (int l = 0; l < 2; ++l) {
          gt.emplace_back(2 * q, dof_ids[l], cols(0, l));
          gt.emplace_back(2 * q + 1, dof_ids[l], cols(1, l));
          cell_coeff -= cols.col(l);
        }
        gt.emplace_back(2 * q, k, cell_coeff.x());
        gt.emplace_back(2 * q + 1, k, cell_coeff.y());
      }

      LleRegion reg;
      std::vector<Vec2> corners{xv, m0, c.center, m1};
      reg.diam = detail::diameter(corners);
      reg.dofs = {k, dof_ids[0], dof_ids[1]};
      reg.dist = {0.0,
                  detail::point_triangles_distance(points[dof_ids[0]], geom.triangles),
                  detail::point_triangles_distance(points[dof_ids[1]], geom.triangles)};
      Eigen::Matrix2Xd full_cols(2, 3);
      full_cols.col(0) = -(cols.col(0) + cols.col(1));
      full_cols.col(1) = cols.col(0);
      full_cols.col(2) = cols.col(1);
      reg.gradient_norm = gradient_matrix_norm(full_cols, reg.diam);
      lle.regions.push_back(std::move(reg));
      data->subcells.push_back(std::move(sub));
    }
  }

  SpMat P(layout->n_nodes(), n_dofs), G(2 * layout->n_nodes(), n_dofs);
  P.setFromTriplets(pt.begin(), pt.end());
  G.setFromTriplets(gt.begin(), gt.end());

  GradientDiscretisation gd("mpfa_o", mesh, std::move(points), std::move(boundary), layout,
                            layout, std::move(P), std::move(G));
  gd.lle = std::move(lle);
  {
    std::vector<int> regions(layout->n_regions());
    for (int r = 0; r < layout->n_regions(); ++r) regions[r] = layout->regions()[r].cell;
    gd.piecewise_constant = std::move(regions);
  }

  // control into the toolbox on the mesh with every face split at its
  // midpoint: cell -> cell dof, half-face -> its (face, vertex) dof
  {
    std::vector<Vec2> vertices(mesh->vertices());
    std::vector<int> midpoint(nf);
    for (int s = 0; s < nf; ++s) {
      midpoint[s] = int(vertices.size());
      vertices.push_back(mesh->face(s).center);
    }
    std::vector<std::array<int, 2>> face_vertices(2 * nf);
    for (int s = 0; s < nf; ++s) {
      const Face& f = mesh->face(s);
      face_vertices[2 * s] = {f.v[0], midpoint[s]};
      face_vertices[2 * s + 1] = {midpoint[s], f.v[1]};
    }
    std::vector<std::vector<int>> cell_faces(nc);
    std::vector<std::optional<Vec2>> centers(nc);
    for (int k = 0; k < nc; ++k) {
      centers[k] = mesh->cell(k).center;
      for (int s : mesh->cell(k).faces) {
        cell_faces[k].push_back(2 * s);
        cell_faces[k].push_back(2 * s + 1);
      }
    }
    auto split = std::make_shared<PolytopalMesh>(std::move(vertices), std::move(cell_faces),
                                                 std::move(face_vertices), centers);
    std::vector<Triplet> phi;
    for (int k = 0; k < nc; ++k) phi.emplace_back(k, k, 1.0);
    for (int s = 0; s < nf; ++s) {
      // half-face [v_slot, midpoint] carries the (face, vertex-slot) dof
      phi.emplace_back(nc + 2 * s, sv_dof(s, 0), 1.0);
      phi.emplace_back(nc + 2 * s + 1, sv_dof(s, 1), 1.0);
    }
    SpMat map(nc + 2 * nf, n_dofs);
    map.setFromTriplets(phi.begin(), phi.end());
    gd.control = ControlSpec{split, std::move(map)};
  }

  SchemeBuild out;
  out.gd = std::move(gd);
  out.mpfa = std::move(data);
  return out;
}

namespace {

// Quadrature average of the tensor over a layout region.
Mat2 region_average(const QuadratureLayout& layout, const QuadRegion& region, const TensorFn& A) {
  Mat2 acc = Mat2::Zero();
  double w = 0;
  for (int q = region.first_node; q < region.first_node + region.n_nodes; ++q) {
    acc += layout.weight(q) * A(layout.point(q));
    w += layout.weight(q);
  }
  return acc / w;
}

// Constant gradient of u on a subcell, read off the tabulated map.
Vec2 subcell_gradient(const SchemeBuild& build, const MpfaData::Subcell& sub,
                      const DofVector& u) {
  const auto& layout = *build.gd.grad_layout();
  const int q = layout.regions()[sub.region].first_node;
  const Eigen::VectorXd g = build.gd.gradient_map().middleRows(2 * q, 2) * u;
  return Vec2(g[0], g[1]);
}

}  // namespace

Eigen::VectorXd mpfa_fluxes(const SchemeBuild& build, const DofVector& u, const TensorFn& A) {
  if (!build.mpfa) throw Error("mpfa_fluxes: not a multi-point build");
  const MpfaData& data = *build.mpfa;
  const auto& layout = *build.gd.grad_layout();
  Eigen::VectorXd F(data.fluxes.size());
  for (const MpfaData::Subcell& sub : data.subcells) {
    const Mat2 Asub = region_average(layout, layout.regions()[sub.region], A);
    const Vec2 flux_vec = Asub * subcell_gradient(build, sub, u);
    for (int fid : sub.flux_ids) {
      const auto& rec = data.fluxes[fid];
      F[fid] = rec.sub_length * rec.normal.dot(flux_vec);
    }
  }
  return F;
}

MpfaEliminated mpfa_eliminate(const SchemeBuild& build, const TensorFn& A, const ScalarFn& f) {
  if (!build.mpfa) throw Error("mpfa_eliminate: not a multi-point build");
  const MpfaData& data = *build.mpfa;
  const PolytopalMesh& mesh = *build.gd.mesh();
  const auto& layout = *build.gd.grad_layout();
  const int nc = mesh.n_cells();
  const int n_sv = build.gd.n_dofs() - nc;

  // flux coefficients: F_fid = sum_j c[fid][sv_dof_j] u_j - (sum c) u_K
  // with subcell-averaged tensors, matching the assembled scheme exactly
  struct FluxCoeffs {
    std::vector<int> sv_dofs;
    std::vector<double> coeff;
    double cell_coeff = 0;
    int cell = -1;
  };
  std::vector<FluxCoeffs> coeffs(data.fluxes.size());
  for (const MpfaData::Subcell& sub : data.subcells) {
    const Mat2 Asub = region_average(layout, layout.regions()[sub.region], A);
    for (int fid : sub.flux_ids) {
      const auto& rec = data.fluxes[fid];
      FluxCoeffs fc;
      fc.cell = sub.cell;
      const Vec2 nA = rec.sub_length * (Asub.transpose() * rec.normal);
      double total = 0;
      for (int gid : sub.flux_ids) {
        const auto& grec = data.fluxes[gid];
        const double c = nA.dot(grec.normal) * grec.sub_length / sub.measure;
        fc.sv_dofs.push_back(grec.sv_dof);
        fc.coeff.push_back(c);
        total += c;
      }
      fc.cell_coeff = -total;
      coeffs[fid] = std::move(fc);
    }
  }

  // group flux records by (face, vertex) to write conservativity equations
  std::map<std::pair<int, int>, std::vector<int>> by_face_vertex;
  for (std::size_t fid = 0; fid < data.fluxes.size(); ++fid)
    by_face_vertex[{data.fluxes[fid].face, data.fluxes[fid].vertex}].push_back(int(fid));

  // local elimination around every vertex
  std::vector<std::vector<std::pair<int, double>>> recovery_rows(n_sv);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    std::vector<int> unknowns;  // sv dofs of interior faces at v
    std::vector<int> cells_at_v;
    for (int s : mesh.vertex_faces()[v]) {
      const Face& fc = mesh.face(s);
      if (fc.v[0] != v && fc.v[1] != v) continue;
      if (!fc.boundary()) {
        const int slot = (fc.v[0] == v) ? 0 : 1;
        unknowns.push_back(nc + 2 * s + slot);
      }
      for (int c : fc.cells)
        if (c >= 0 && std::find(cells_at_v.begin(), cells_at_v.end(), c) == cells_at_v.end())
          cells_at_v.push_back(c);
    }
    if (unknowns.empty()) continue;
    auto unknown_index = [&](int dof) {
      for (std::size_t j = 0; j < unknowns.size(); ++j)
        if (unknowns[j] == dof) return int(j);
      return -1;
    };
    auto cell_index = [&](int k) {
      for (std::size_t j = 0; j < cells_at_v.size(); ++j)
        if (cells_at_v[j] == k) return int(j);
      throw Error("mpfa_eliminate: internal cell indexing error");
    };

    const int m = int(unknowns.size());
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, int(cells_at_v.size()));
    int row = 0;
    for (int s : mesh.vertex_faces()[v]) {
      const Face& fc = mesh.face(s);
      if ((fc.v[0] != v && fc.v[1] != v) || fc.boundary()) continue;
      for (int fid : by_face_vertex.at({s, v})) {
        const FluxCoeffs& c = coeffs[fid];
        for (std::size_t j = 0; j < c.sv_dofs.size(); ++j) {
          const int uj = unknown_index(c.sv_dofs[j]);
          if (uj >= 0)
            S(row, uj) += c.coeff[j];
          // boundary sv dofs are structurally zero: no contribution
        }
        T(row, cell_index(c.cell)) -= c.cell_coeff;
      }
      ++row;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
    if (!lu.isInvertible())
      throw Error("mpfa_eliminate: singular local system at vertex " + std::to_string(v));
    const Eigen::MatrixXd W = lu.solve(T);
    for (int j = 0; j < m; ++j)
      for (std::size_t l = 0; l < cells_at_v.size(); ++l)
        if (W(j, int(l)) != 0.0)
          recovery_rows[unknowns[j] - nc].emplace_back(cells_at_v[l], W(j, int(l)));
  }

  MpfaEliminated out;
  {
    std::vector<Triplet> rec_trip;
    for (int r = 0; r < n_sv; ++r)
      for (const auto& [col, w] : recovery_rows[r]) rec_trip.emplace_back(r, col, w);
    out.recovery.resize(n_sv, nc);
    out.recovery.setFromTriplets(rec_trip.begin(), rec_trip.end());
  }

  // cell equations: -(sum of outward fluxes) = cell source integral
  std::vector<Triplet> cell_trip;
  for (std::size_t fid = 0; fid < data.fluxes.size(); ++fid) {
    const FluxCoeffs& c = coeffs[fid];
    cell_trip.emplace_back(c.cell, c.cell, -c.cell_coeff);
    for (std::size_t j = 0; j < c.sv_dofs.size(); ++j)
      for (const auto& [kcol, w] : recovery_rows[c.sv_dofs[j] - nc])
        cell_trip.emplace_back(c.cell, kcol, -c.coeff[j] * w);
  }
  out.cell_matrix.resize(nc, nc);
  out.cell_matrix.setFromTriplets(cell_trip.begin(), cell_trip.end());

  out.rhs = Eigen::VectorXd::Zero(nc);
  const auto& pi_layout = *build.gd.pi_layout();
  for (int q = 0; q < pi_layout.n_nodes(); ++q)
    out.rhs[pi_layout.cell_of(q)] += pi_layout.weight(q) * f(pi_layout.point(q));
  return out;
}

DofVector mpfa_expand(const SchemeBuild& build, const MpfaEliminated& sys,
                      const Eigen::VectorXd& cell_values) {
  const int nc = build.gd.mesh()->n_cells();
  DofVector full = DofVector::Zero(build.gd.n_dofs());
  full.head(nc) = cell_values;
  full.tail(build.gd.n_dofs() - nc) = sys.recovery * cell_values;
  return full;
}

}  // namespace gslab
