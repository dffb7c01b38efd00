#include "gslab/pencil.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <cmath>

namespace gslab {

double pencil_lambda_max_dense(const SpMat& M, const SpMat& K) {
  Eigen::MatrixXd Md(M), Kd(K);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Md, Kd,
                                                               Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success)
    throw NumericalError("dense generalized eigensolve failed (pencil not definite?)");
  return es.eigenvalues().maxCoeff();
}

double pencil_lambda_min_dense(const SpMat& M, const SpMat& K) {
  Eigen::MatrixXd Md(M), Kd(K);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Md, Kd,
                                                               Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success)
    throw NumericalError("dense generalized eigensolve failed (pencil not definite?)");
  return es.eigenvalues().minCoeff();
}

PencilResult pencil_lambda_max_lanczos(const SpMat& M, const SpMat& K,
                                       const PencilOptions& opts) {
  const int n = int(K.rows());
  if (n == 0) return {0.0, 0, true};

  Eigen::SimplicialLDLT<SpMat> chol(K);
  if (chol.info() != Eigen::Success)
    throw NumericalError("Lanczos: Cholesky of the gradient Gram matrix failed");

  // Lanczos on T = K^{-1} M, self-adjoint in the K-inner product.
  const int m_max = std::min(n, 200);
  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alpha, beta;

  Rng rng(opts.seed);
  Eigen::VectorXd q(n);
  for (int i = 0; i < n; ++i) q[i] = rng.next_symmetric();
  double qnorm = std::sqrt(q.dot(K * q));
  if (qnorm == 0) throw NumericalError("Lanczos: degenerate start vector");
  q /= qnorm;

  double lambda_prev = 0;
  int restarts_left = opts.max_iter / m_max + 1;
  PencilResult result;
  result.converged = false;

  while (restarts_left-- > 0) {
    basis.clear();
    alpha.clear();
    beta.clear();
    basis.push_back(q);
    for (int j = 0; j < m_max; ++j) {
      Eigen::VectorXd w = chol.solve(M * basis[j]);
      const double a = basis[j].dot(K * w);
      alpha.push_back(a);
      w -= a * basis[j];
      if (j > 0) w -= beta[j - 1] * basis[j - 1];
      // full reorthogonalisation in the K-inner product
      for (const auto& v : basis) w -= v.dot(K * w) * v;
      const double b = std::sqrt(std::max(0.0, w.dot(K * w)));
      result.iterations++;

      // tridiagonal eigenvalue
      const int m = int(alpha.size());
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        T(i, i) = alpha[i];
        if (i > 0) T(i, i - 1) = T(i - 1, i) = beta[i - 1];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
      const double lambda = es.eigenvalues().maxCoeff();
      const double scale = std::max(std::abs(lambda), 1e-300);
      if (j >= 2 && std::abs(lambda - lambda_prev) <= opts.tol * scale) {
        result.lambda = lambda;
        result.converged = true;
        return result;
      }
      lambda_prev = lambda;
      if (b <= 1e-300 || m == n) {  // invariant subspace reached: exact
        result.lambda = lambda;
        result.converged = true;
        return result;
      }
      beta.push_back(b);
      basis.push_back(w / b);
      if (result.iterations >= opts.max_iter) {
        result.lambda = lambda;
        return result;
      }
    }
    q = basis.back();  // restart from the last direction
  }
  result.lambda = lambda_prev;
  return result;
}

PencilResult pencil_lambda_max(const SpMat& M, const SpMat& K, const PencilOptions& opts) {
  const bool dense = opts.path == EigPath::Dense ||
                     (opts.path == EigPath::Auto && K.rows() < opts.dense_threshold);
  if (dense) return {pencil_lambda_max_dense(M, K), 0, true};
  return pencil_lambda_max_lanczos(M, K, opts);
}

double dual_norm_sq(const SpMat& K, const Eigen::VectorXd& r) {
  Eigen::SimplicialLDLT<SpMat> chol(K);
  if (chol.info() != Eigen::Success)
    throw NumericalError("dual norm: Cholesky of the gradient Gram matrix failed");
  return r.dot(chol.solve(r));
}

CgResult cg_solve(const SpMat& A, const Eigen::VectorXd& b, double tol, int max_iter) {
  const int n = int(A.rows());
  if (max_iter <= 0) max_iter = std::max(200, 20 * n);
  CgResult res;
  res.x = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0) return res;

  Eigen::VectorXd invdiag(n);
  for (int i = 0; i < n; ++i) {
    const double d = A.coeff(i, i);
    if (d <= 0) throw NumericalError("cg_solve: nonpositive diagonal entry (matrix not SPD)");
    invdiag[i] = 1.0 / d;
  }

  Eigen::VectorXd r = b;
  Eigen::VectorXd z = invdiag.asDiagonal() * r;
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd Ap = A * p;
    const double pAp = p.dot(Ap);
    if (pAp <= 0) throw NumericalError("cg_solve: breakdown after " + std::to_string(it) +
                                       " iterations (matrix not SPD)");
    const double a = rz / pAp;
    res.x += a * p;
    r -= a * Ap;
    res.iterations = it + 1;
    res.relative_residual = r.norm() / bnorm;
    if (res.relative_residual <= tol) {
      res.converged = true;
      return res;
    }
    z = invdiag.asDiagonal() * r;
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  res.converged = false;
  return res;
}

}  // namespace gslab
