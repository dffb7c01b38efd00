#ifndef GSLAB_SOLVER_HPP
#define GSLAB_SOLVER_HPP

#include "gslab/gd.hpp"
#include "gslab/measures.hpp"
#include "gslab/problem.hpp"

namespace gslab {

/// Symmetric system over interior dofs.
struct SparseSystem {
  SpMat matrix;
  Eigen::VectorXd rhs;
};

/// Stiffness int A grad e_j . grad e_i and load int f Pi e_i, over interior
/// dofs, with the tensor sampled at the scheme's gradient nodes (exact
/// whenever A is piecewise constant on the gradient regions).
SparseSystem assemble_linear(const GradientDiscretisation& gd, const DiffusionProblem& problem);

struct SolveOptions {
  double tol = 1e-10;       ///< relative residual contract
  int dense_threshold = 2000;
  bool force_iterative = false;
  int max_iter = 0;         ///< 0 = auto
};

/// Direct solve below the size threshold, Jacobi-preconditioned conjugate
/// gradients above it. Returns interior values.
Eigen::VectorXd solve_spd(const SparseSystem& system, const SolveOptions& opts = {});

/// Assemble + solve; returns the full dof vector (zeros on the boundary).
DofVector solve_linear(const GradientDiscretisation& gd, const DiffusionProblem& problem,
                       const SolveOptions& opts = {});

/// Which realisation of the zero-order term to use: FunctionOfValues applies
/// beta pointwise to the reconstructed function; DofwiseReconstruction
/// reconstructs the vector of beta(dof values). The two coincide exactly for
/// piecewise-constant reconstructions.
enum class SemilinearForm { FunctionOfValues, DofwiseReconstruction };

struct NewtonReport {
  int iterations = 0;
  double residual = 0;
  bool converged = false;
};

DofVector solve_semilinear(const GradientDiscretisation& gd, const DiffusionProblem& problem,
                           SemilinearForm form, NewtonReport* report = nullptr,
                           const SolveOptions& opts = {});

struct ErrorReport {
  double err_l2 = 0;       ///< reconstruction error against the exact solution
  double err_h1 = 0;       ///< gradient error
  double rhs_conformity = 0;   ///< Stokes-residual defect of the exact flux
  double rhs_consistency = 0;  ///< interpolant defect of the exact solution
  double rhs_total = 0;
};

/// Errors of a discrete solution against the manufactured solution, plus the
/// a-priori right-hand side (flux defect + interpolant defect).
ErrorReport error_report(const GradientDiscretisation& gd, const DofVector& u,
                         const DiffusionProblem& problem, bool with_rhs = true,
                         const PencilOptions& eig_opts = {});

}  // namespace gslab

#endif
