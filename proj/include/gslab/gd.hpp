#ifndef GSLAB_GD_HPP
#define GSLAB_GD_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gslab/mesh.hpp"
#include "gslab/quadrature.hpp"

namespace gslab {

/// Full-length vector of degrees of freedom (boundary entries included and
/// structurally zero for members of the homogeneous-Dirichlet space).
using DofVector = Eigen::VectorXd;

/// Metadata of one region of a locally linearly exact gradient: the dofs it
/// reads, how far their approximation points sit from the region, and the
/// sup-norm of the local gradient reconstruction. Distances may be safe upper
/// bounds when the region geometry is only known through its measure.
struct LleRegion {
  double diam = 0;
  std::vector<int> dofs;
  std::vector<double> dist;
  double gradient_norm = 0;  ///< diam(U)-scaled sup-norm over the unit max-norm ball
  bool gradient_norm_is_bound = false;  ///< true when enumeration was truncated
};

struct LleStructure {
  std::vector<LleRegion> regions;
};

/// Linear map from a discretisation's dof space into the cell+face dof space
/// of a polytopal toolbox, used to certify coercivity/limit-conformity/
/// compactness. Rows are indexed toolbox cells first, then toolbox faces.
struct ControlSpec {
  MeshPtr toolbox_mesh;  ///< may be a derived mesh (e.g. with split faces)
  SpMat map;             ///< (n_cells + n_faces) x n_dofs
};

/// A gradient discretisation: dof space with homogeneous-Dirichlet boundary
/// dofs, plus function and gradient reconstructions tabulated at quadrature
/// nodes through two sparse maps. Immutable after construction.
class GradientDiscretisation {
public:
  GradientDiscretisation() = default;
  GradientDiscretisation(std::string name, MeshPtr mesh, std::vector<Vec2> points,
                         std::vector<bool> boundary, LayoutPtr pi_layout, LayoutPtr grad_layout,
                         SpMat reconstruction, SpMat gradient);

  const std::string& name() const { return m_name; }
  const MeshPtr& mesh() const { return m_mesh; }

  int n_dofs() const { return int(m_points.size()); }
  int n_interior() const { return int(m_interior.size()); }
  const Vec2& point(int i) const { return m_points[i]; }
  bool is_boundary_dof(int i) const { return m_boundary[i]; }
  const std::vector<int>& interior_dofs() const { return m_interior; }

  const LayoutPtr& pi_layout() const { return m_pi_layout; }
  const LayoutPtr& grad_layout() const { return m_grad_layout; }
  const SpMat& reconstruction_map() const { return m_P; }
  const SpMat& gradient_map() const { return m_G; }

  /// Restriction of a map's columns to interior dofs (X_{D,0} coordinates).
  SpMat interior_columns(const SpMat& m) const;
  DofVector extend(const Eigen::VectorXd& interior_values) const;
  Eigen::VectorXd restrict(const DofVector& full) const;

  // optional structure, attached by the scheme builders
  std::optional<LleStructure> lle;
  /// pi-layout region -> dof whose value the reconstruction takes there;
  /// present exactly when the reconstruction is piecewise constant.
  std::optional<std::vector<int>> piecewise_constant;
  std::optional<ControlSpec> control;
  std::optional<double> stabilisation_comparability;  ///< zeta, for stabilised schemes
  std::optional<double> condensation_regularity;      ///< reg of a barycentric condensation

private:
  std::string m_name;
  MeshPtr m_mesh;
  std::vector<Vec2> m_points;
  std::vector<bool> m_boundary;
  std::vector<int> m_interior;
  LayoutPtr m_pi_layout, m_grad_layout;
  SpMat m_P, m_G;
};

/// Dof vector sampling a function at the approximation points. Boundary dofs
/// are zeroed unless zero_boundary is false (used by exactness tests on
/// functions that do not vanish on the boundary).
DofVector interpolate(const GradientDiscretisation& gd,
                      const std::function<double(const Vec2&)>& f, bool zero_boundary = true);

ScalarField reconstruct(const GradientDiscretisation& gd, const DofVector& u);
VectorField reconstruct_gradient(const GradientDiscretisation& gd, const DofVector& u);

/// Both reconstructions at once.
std::pair<ScalarField, VectorField> evaluate(const GradientDiscretisation& gd, const DofVector& u);

/// Regularity of the locally linearly exact structure: worst region term
/// (gradient norm + farthest point over diameter) plus the largest absolute
/// row sum of the reconstruction coefficients over quadrature nodes.
double lle_regularity(const GradientDiscretisation& gd);

struct LleBoundReport {
  int region = -1;
  double max_error = 0;  ///< worst |grad - grad phi| over the region's nodes
  double bound = 0;
  bool ok = true;
};

/// Checks, region by region, the a-priori bound on the gradient of the
/// interpolant of a W^{2,inf} function against the reconstruction.
std::vector<LleBoundReport> lle_gradient_bound_check(
    const GradientDiscretisation& gd, const std::function<double(const Vec2&)>& phi,
    const std::function<Vec2(const Vec2&)>& grad_phi, double w2inf_norm);

/// diam(U)-scaled sup-norm of a constant-per-region gradient reconstruction
/// with local columns `cols` (2 x n): exact sign enumeration for small n,
/// column-sum upper bound otherwise (flag reports which).
double gradient_matrix_norm(const Eigen::Matrix2Xd& cols, double diam, bool* is_bound = nullptr);

}  // namespace gslab

#endif
