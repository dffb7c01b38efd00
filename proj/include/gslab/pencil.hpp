#ifndef GSLAB_PENCIL_HPP
#define GSLAB_PENCIL_HPP

#include "gslab/common.hpp"

namespace gslab {

/// Path selection for the extremal solvers: Auto picks Dense below the
/// crossover size and Lanczos above it; tests force one or the other.
enum class EigPath { Auto, Dense, Lanczos };

struct PencilOptions {
  EigPath path = EigPath::Auto;
  double tol = 1e-10;   ///< relative eigenvalue tolerance
  int max_iter = 5000;
  int dense_threshold = 2000;
  std::uint64_t seed = 0x5eed0001ULL;
};

struct PencilResult {
  double lambda = 0;
  int iterations = 0;
  bool converged = true;
};

/// Largest eigenvalue of the symmetric pencil (M, K): max of x'Mx / x'Kx.
/// M symmetric positive semidefinite, K symmetric positive definite.
PencilResult pencil_lambda_max(const SpMat& M, const SpMat& K, const PencilOptions& opts = {});

/// Dense generalized eigendecomposition (the brute-force oracle).
double pencil_lambda_max_dense(const SpMat& M, const SpMat& K);

/// Smallest eigenvalue of the pencil, dense path (fixture-sized checks only).
double pencil_lambda_min_dense(const SpMat& M, const SpMat& K);

/// Lanczos in the K-inner product on K^{-1} M, full reorthogonalisation.
PencilResult pencil_lambda_max_lanczos(const SpMat& M, const SpMat& K, const PencilOptions& opts);

/// r' K^{-1} r by sparse Cholesky.
double dual_norm_sq(const SpMat& K, const Eigen::VectorXd& r);

struct CgResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double relative_residual = 0;
  bool converged = true;
};

/// Jacobi-preconditioned conjugate gradients on an SPD matrix.
CgResult cg_solve(const SpMat& A, const Eigen::VectorXd& b, double tol = 1e-10,
                  int max_iter = 0);

}  // namespace gslab

#endif
