#ifndef GSLAB_TOOLBOX_HPP
#define GSLAB_TOOLBOX_HPP

#include <functional>

#include "gslab/mesh.hpp"
#include "gslab/quadrature.hpp"

namespace gslab {

/// Cell-and-face dof vector of the polytopal toolbox, with boundary face
/// values forced to zero.
struct ToolboxVector {
  Eigen::VectorXd cells;
  Eigen::VectorXd faces;

  static ToolboxVector zero(const PolytopalMesh& mesh) {
    return {Eigen::VectorXd::Zero(mesh.n_cells()), Eigen::VectorXd::Zero(mesh.n_faces())};
  }
};

/// Zeroes the boundary-face entries (membership of the Dirichlet space).
void enforce_boundary(const PolytopalMesh& mesh, ToolboxVector& v);
bool boundary_ok(const PolytopalMesh& mesh, const ToolboxVector& v, double tol = 0.0);

/// Piecewise-constant reconstruction: cell value on each cell.
Eigen::VectorXd toolbox_reconstruction(const PolytopalMesh& mesh, const ToolboxVector& v);

/// Per-cell discrete gradient (1/|K|) sum |sigma| (v_sigma - v_K) n_{K,sigma}.
Eigen::Matrix2Xd toolbox_gradient(const PolytopalMesh& mesh, const ToolboxVector& v);

/// Same gradient without the v_K term; equals toolbox_gradient because the
/// measure-weighted normals of a closed cell sum to zero.
Eigen::Matrix2Xd toolbox_gradient_face_only(const PolytopalMesh& mesh, const ToolboxVector& v);

/// Discrete W^{1,p}_0 norm: sum over (K,sigma) of |sigma| d |(v_sigma-v_K)/d|^p.
double toolbox_norm(const PolytopalMesh& mesh, const ToolboxVector& v, double p);

/// L^p norm of the piecewise-constant toolbox gradient.
double toolbox_gradient_lp(const PolytopalMesh& mesh, const ToolboxVector& v, double p);

/// Residual of the discrete Stokes formula against an analytic field:
/// | integral of (grad_T v . psi + Pi_T v div psi) |.
double stokes_defect(const PolytopalMesh& mesh, const ToolboxVector& v,
                     const std::function<Vec2(const Vec2&)>& psi,
                     const std::function<double(const Vec2&)>& div_psi,
                     int quad_degree = kDefaultQuadDegree);

/// Toolbox vector interpolating an analytic function at cell centres and face
/// midpoints (boundary faces zeroed).
ToolboxVector toolbox_interpolate(const PolytopalMesh& mesh,
                                  const std::function<double(const Vec2&)>& f);

/// Quadrature layout with one region per cell (cells triangulated by the
/// half-diamond fan around their centre).
LayoutPtr cell_layout(const PolytopalMesh& mesh, int degree = kDefaultQuadDegree);

/// Interior-dof indexing for the toolbox space: cells first, then interior
/// faces. Used by the quadratic forms below and by control maps.
struct ToolboxIndex {
  explicit ToolboxIndex(const PolytopalMesh& mesh);
  int n() const { return n_total; }
  int cell(int k) const { return k; }
  int face(int s) const { return face_index[s]; }  ///< -1 for boundary faces
  int n_cells = 0;
  int n_total = 0;
  std::vector<int> face_index;
};

/// Matrix of the p=2 toolbox norm (assembled over interior dofs).
SpMat toolbox_norm_matrix(const PolytopalMesh& mesh);

/// Matrix of the p=2 reconstruction form: diag(|K|) on cells, 0 on faces.
SpMat toolbox_mass_matrix(const PolytopalMesh& mesh);

}  // namespace gslab

#endif
