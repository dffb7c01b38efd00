#ifndef GSLAB_MEASURES_HPP
#define GSLAB_MEASURES_HPP

#include "gslab/gd.hpp"
#include "gslab/pencil.hpp"
#include "gslab/toolbox.hpp"

namespace gslab {

/// Gram matrix of the reconstruction over interior dofs.
SpMat gram_reconstruction(const GradientDiscretisation& gd);
/// Gram matrix of the gradient over interior dofs (positive definite for any
/// valid discretisation).
SpMat gram_gradient(const GradientDiscretisation& gd);

/// Operator norm of the reconstruction against the gradient norm at p = 2
/// (the discrete Poincare constant of the discretisation).
double coercivity_constant(const GradientDiscretisation& gd, const PencilOptions& opts = {});

/// Monte-Carlo lower bound for p != 2.
double coercivity_lower_bound(const GradientDiscretisation& gd, double p, int n_samples = 10000,
                              std::uint64_t seed = 0xC0E5C1ULL);

struct ConsistencyDefect {
  double interpolant_bound = 0;  ///< sum of the two errors at the point interpolant
  double lower = 0;              ///< least-squares value: at most the true defect
  double upper = 0;              ///< sqrt(2) * lower: at least the true defect
};

/// Best-approximation defect of (phi, grad phi): rigorous enclosure via the
/// sum-of-squares minimiser plus the interpolant upper bound.
ConsistencyDefect consistency_defect(const GradientDiscretisation& gd,
                                     const std::function<double(const Vec2&)>& phi,
                                     const std::function<Vec2(const Vec2&)>& grad_phi,
                                     double p = 2.0);

/// Dual-norm size of the discrete Stokes residual against the field psi
/// (exact at p = 2: sqrt(r' K^{-1} r)).
double limit_conformity_defect(const GradientDiscretisation& gd,
                               const std::function<Vec2(const Vec2&)>& psi,
                               const std::function<double(const Vec2&)>& div_psi,
                               const PencilOptions& opts = {});

/// Monte-Carlo lower bound of the defect for p != 2.
double limit_conformity_lower_bound(const GradientDiscretisation& gd,
                                    const std::function<Vec2(const Vec2&)>& psi,
                                    const std::function<double(const Vec2&)>& div_psi, double p,
                                    int n_samples = 10000, std::uint64_t seed = 0x11f0ULL);

struct OmegaGradStatus {
  bool certified_zero = false;
  double max_residual = 0;  ///< worst per-cell integral mismatch, scaled by |K|
  double bound = 0;         ///< reported when not certified zero
};

struct ControlReport {
  double phi_norm = 0;   ///< toolbox-norm of the control per unit gradient norm
  double omega_pi = 0;   ///< reconstruction discrepancy per unit gradient norm
  OmegaGradStatus omega_grad;
};

/// Quality of the control map attached to the discretisation: exact p = 2
/// extremal values for the norm and the reconstruction discrepancy, and a
/// per-cell certificate (necessary and sufficient, by linearity) that the
/// cell-averaged gradients coincide.
ControlReport control_report(const GradientDiscretisation& gd, const PencilOptions& opts = {});

/// Exact p = 2 extremal ratio of the toolbox reconstruction against the
/// toolbox norm on a mesh.
double poincare_constant(const PolytopalMesh& mesh, const PencilOptions& opts = {});

}  // namespace gslab

#endif
