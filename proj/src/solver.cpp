#include "gslab/solver.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "gslab/pencil.hpp"

namespace gslab {

SparseSystem assemble_linear(const GradientDiscretisation& gd, const DiffusionProblem& problem) {
  const SpMat G = gd.interior_columns(gd.gradient_map());
  const auto& g_layout = *gd.grad_layout();

  // weighted gradient rows: w_q A(x_q)^{1/2}-free form; assemble G' W_A G by
  // scaling rows with the 2x2 tensor blocks (A symmetric, applied exactly)
  std::vector<Triplet> wt;
  wt.reserve(4 * g_layout.n_nodes());
  for (int q = 0; q < g_layout.n_nodes(); ++q) {
    const Mat2 a = problem.tensor(g_layout.point(q));
    if (std::abs(a(0, 1) - a(1, 0)) > 1e-12 * std::max(1.0, a.norm()))
      throw Error("assemble_linear: tensor not symmetric at a quadrature node");
    const double tr = a.trace(), det = a.determinant();
    if (tr <= 0 || det <= 0)
      throw Error("assemble_linear: tensor not positive definite at a quadrature node");
    const double w = g_layout.weight(q);
    wt.emplace_back(2 * q, 2 * q, w * a(0, 0));
    wt.emplace_back(2 * q, 2 * q + 1, w * a(0, 1));
    wt.emplace_back(2 * q + 1, 2 * q, w * a(1, 0));
    wt.emplace_back(2 * q + 1, 2 * q + 1, w * a(1, 1));
  }
  SpMat WA(2 * g_layout.n_nodes(), 2 * g_layout.n_nodes());
  WA.setFromTriplets(wt.begin(), wt.end());

  SparseSystem sys;
  sys.matrix = SpMat(G.transpose()) * (WA * G);

  const SpMat P = gd.interior_columns(gd.reconstruction_map());
  const auto& pi_layout = *gd.pi_layout();
  Eigen::VectorXd fw(pi_layout.n_nodes());
  for (int q = 0; q < pi_layout.n_nodes(); ++q)
    fw[q] = pi_layout.weight(q) * problem.source(pi_layout.point(q));
  sys.rhs = P.transpose() * fw;
  return sys;
}

Eigen::VectorXd solve_spd(const SparseSystem& system, const SolveOptions& opts) {
  const int n = int(system.matrix.rows());
  if (n == 0) return Eigen::VectorXd();
  if (!opts.force_iterative && n < opts.dense_threshold) {
    Eigen::MatrixXd dense(system.matrix);
    Eigen::LDLT<Eigen::MatrixXd> fac(dense);
    if (fac.info() != Eigen::Success)
      throw NumericalError("solve_spd: dense factorisation failed (matrix not SPD?)");
    return fac.solve(system.rhs);
  }
  CgResult res = cg_solve(system.matrix, system.rhs, opts.tol, opts.max_iter);
  if (!res.converged)
    throw NumericalError("solve_spd: conjugate gradients stalled at relative residual " +
                         std::to_string(res.relative_residual) + " after " +
                         std::to_string(res.iterations) + " iterations");
  return res.x;
}

DofVector solve_linear(const GradientDiscretisation& gd, const DiffusionProblem& problem,
                       const SolveOptions& opts) {
  if (problem.semilinear())
    throw Error("solve_linear: problem has a zero-order nonlinearity");
  return gd.extend(solve_spd(assemble_linear(gd, problem), opts));
}

DofVector solve_semilinear(const GradientDiscretisation& gd, const DiffusionProblem& problem,
                           SemilinearForm form, NewtonReport* report, const SolveOptions& opts) {
  if (!problem.semilinear()) return solve_linear(gd, problem, opts);

  const SparseSystem lin = assemble_linear(gd, problem);
  const SpMat P = gd.interior_columns(gd.reconstruction_map());
  const auto& layout = *gd.pi_layout();
  Eigen::VectorXd w(layout.n_nodes());
  for (int q = 0; q < layout.n_nodes(); ++q) w[q] = layout.weight(q);
  const SpMat M = SpMat(P.transpose()) * (w.asDiagonal() * P);

  const int n = int(lin.rhs.size());
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);

  auto residual = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    if (form == SemilinearForm::FunctionOfValues) {
      Eigen::VectorXd vals = P * v;
      for (int q = 0; q < vals.size(); ++q) vals[q] = w[q] * problem.beta(vals[q]);
      return lin.matrix * v + P.transpose() * vals - lin.rhs;
    }
    Eigen::VectorXd bv(n);
    for (int i = 0; i < n; ++i) bv[i] = problem.beta(v[i]);
    return lin.matrix * v + M * bv - lin.rhs;
  };
  auto jacobian = [&](const Eigen::VectorXd& v) -> SpMat {
    if (form == SemilinearForm::FunctionOfValues) {
      Eigen::VectorXd vals = P * v;
      Eigen::VectorXd dw(vals.size());
      for (int q = 0; q < vals.size(); ++q) dw[q] = w[q] * problem.beta_prime(vals[q]);
      return lin.matrix + SpMat(P.transpose()) * (dw.asDiagonal() * P);
    }
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d[i] = problem.beta_prime(v[i]);
    return SpMat(lin.matrix + M * SpMat(d.asDiagonal()));
  };

  const double scale = std::max(lin.rhs.norm(), 1e-300);
  NewtonReport rep;
  Eigen::VectorXd r = residual(u);
  for (rep.iterations = 0; rep.iterations < 50; ++rep.iterations) {
    rep.residual = r.norm() / scale;
    if (rep.residual <= opts.tol) {
      rep.converged = true;
      break;
    }
    SparseSystem step{jacobian(u), -r};
    // the dofwise form may yield a mildly unsymmetric Jacobian; symmetrise
    // for the inner solve (Newton direction quality is what matters)
    step.matrix = 0.5 * (SpMat(step.matrix.transpose()) + step.matrix);
    Eigen::VectorXd du = solve_spd(step, opts);

    // residual-norm line search with halving
    double t = 1.0;
    const double r0 = r.norm();
    while (t >= 0x1p-20) {
      Eigen::VectorXd trial = residual(u + t * du);
      if (trial.norm() < r0 * (1.0 - 1e-4 * t) || trial.norm() / scale <= opts.tol) {
        u += t * du;
        r = std::move(trial);
        break;
      }
      t *= 0.5;
    }
    if (t < 0x1p-20)
      throw NumericalError("solve_semilinear: line search stalled at relative residual " +
                           std::to_string(rep.residual));
  }
  if (!rep.converged)
    throw NumericalError("solve_semilinear: no convergence after 50 iterations, residual " +
                         std::to_string(rep.residual));
  if (report) *report = rep;
  return gd.extend(u);
}

ErrorReport error_report(const GradientDiscretisation& gd, const DofVector& u,
                         const DiffusionProblem& problem, bool with_rhs,
                         const PencilOptions& eig_opts) {
  if (!problem.manufactured()) throw Error("error_report: problem has no manufactured solution");
  ErrorReport out;
  const auto [pu, gu] = evaluate(gd, u);
  out.err_l2 = lp_distance(pu, problem.exact, 2.0);
  out.err_h1 = lp_distance(gu, problem.exact_grad, 2.0);
  if (with_rhs) {
    // div(A grad u) = beta(u) - f, pointwise, by manufacture
    const auto& problem_ref = problem;
    auto div_flux = [&problem_ref](const Vec2& x) {
      double d = -problem_ref.source(x);
      if (problem_ref.semilinear()) d += problem_ref.beta(problem_ref.exact(x));
      return d;
    };
    out.rhs_conformity = limit_conformity_defect(gd, problem.exact_flux, div_flux, eig_opts);
    const auto defect = consistency_defect(gd, problem.exact, problem.exact_grad, 2.0);
    out.rhs_consistency = defect.interpolant_bound;
    out.rhs_total = out.rhs_conformity + out.rhs_consistency;
  }
  return out;
}

}  // namespace gslab
