#include "gslab/measures.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>

namespace gslab {

namespace {

Eigen::VectorXd sqrt_weights_scalar(const QuadratureLayout& layout) {
  Eigen::VectorXd w(layout.n_nodes());
  for (int q = 0; q < layout.n_nodes(); ++q) w[q] = std::sqrt(layout.weight(q));
  return w;
}

Eigen::VectorXd sqrt_weights_vector(const QuadratureLayout& layout) {
  Eigen::VectorXd w(2 * layout.n_nodes());
  for (int q = 0; q < layout.n_nodes(); ++q)
    w[2 * q] = w[2 * q + 1] = std::sqrt(layout.weight(q));
  return w;
}

}  // namespace

SpMat gram_reconstruction(const GradientDiscretisation& gd) {
  SpMat P = gd.interior_columns(gd.reconstruction_map());
  SpMat Pw = sqrt_weights_scalar(*gd.pi_layout()).asDiagonal() * P;
  return SpMat(Pw.transpose()) * Pw;
}

SpMat gram_gradient(const GradientDiscretisation& gd) {
  SpMat G = gd.interior_columns(gd.gradient_map());
  SpMat Gw = sqrt_weights_vector(*gd.grad_layout()).asDiagonal() * G;
  return SpMat(Gw.transpose()) * Gw;
}

double coercivity_constant(const GradientDiscretisation& gd, const PencilOptions& opts) {
  if (gd.n_interior() == 0) return 0.0;
  const SpMat M = gram_reconstruction(gd);
  const SpMat K = gram_gradient(gd);
  const PencilResult res = pencil_lambda_max(M, K, opts);
  if (!res.converged)
    throw NumericalError("coercivity_constant: eigensolve did not converge after " +
                         std::to_string(res.iterations) + " iterations");
  return std::sqrt(std::max(0.0, res.lambda));
}

double coercivity_lower_bound(const GradientDiscretisation& gd, double p, int n_samples,
                              std::uint64_t seed) {
  Rng rng(seed);
  double best = 0;
  for (int s = 0; s < n_samples; ++s) {
    DofVector u = DofVector::Zero(gd.n_dofs());
    for (int i : gd.interior_dofs()) u[i] = rng.next_symmetric();
    const double denom = lp_norm(reconstruct_gradient(gd, u), p);
    if (denom == 0) continue;
    best = std::max(best, lp_norm(reconstruct(gd, u), p) / denom);
  }
  return best;
}

ConsistencyDefect consistency_defect(const GradientDiscretisation& gd,
                                     const std::function<double(const Vec2&)>& phi,
                                     const std::function<Vec2(const Vec2&)>& grad_phi, double p) {
  ConsistencyDefect out;
  // interpolant bound at any p
  {
    const DofVector v = interpolate(gd, phi);
    const auto [pv, gv] = evaluate(gd, v);
    out.interpolant_bound = lp_distance(pv, phi, p) + lp_distance(gv, grad_phi, p);
  }
  if (p != 2.0) {
    // no quadratic structure away from p = 2: report the interpolant bound
    // as the only certified enclosure
    out.lower = 0.0;
    out.upper = out.interpolant_bound;
    return out;
  }
  if (gd.n_interior() == 0) {
    // the only admissible vector is zero
    const auto [p0, g0] = evaluate(gd, DofVector::Zero(gd.n_dofs()));
    const double a = lp_distance(p0, phi, 2.0);
    const double b = lp_distance(g0, grad_phi, 2.0);
    out.lower = std::sqrt(a * a + b * b);
    out.upper = std::sqrt(2.0) * out.lower;
    return out;
  }

  // least-squares minimiser of ||Pi u - phi||^2 + ||grad u - grad phi||^2
  const SpMat M = gram_reconstruction(gd);
  const SpMat K = gram_gradient(gd);
  const SpMat P = gd.interior_columns(gd.reconstruction_map());
  const SpMat G = gd.interior_columns(gd.gradient_map());

  const auto& pi_layout = *gd.pi_layout();
  Eigen::VectorXd f_pi(pi_layout.n_nodes());
  for (int q = 0; q < pi_layout.n_nodes(); ++q)
    f_pi[q] = pi_layout.weight(q) * phi(pi_layout.point(q));
  const auto& g_layout = *gd.grad_layout();
  Eigen::VectorXd f_g(2 * g_layout.n_nodes());
  for (int q = 0; q < g_layout.n_nodes(); ++q) {
    const Vec2 gp = grad_phi(g_layout.point(q));
    f_g[2 * q] = g_layout.weight(q) * gp.x();
    f_g[2 * q + 1] = g_layout.weight(q) * gp.y();
  }
  const Eigen::VectorXd c = P.transpose() * f_pi + G.transpose() * f_g;

  SpMat A = M + K;
  Eigen::SimplicialLDLT<SpMat> chol(A);
  if (chol.info() != Eigen::Success)
    throw NumericalError("consistency_defect: normal-equation factorisation failed");
  const Eigen::VectorXd u = chol.solve(c);
  const DofVector full = gd.extend(u);
  const auto [pu, gu] = evaluate(gd, full);
  const double a = lp_distance(pu, phi, 2.0);
  const double b = lp_distance(gu, grad_phi, 2.0);
  out.lower = std::sqrt(a * a + b * b);
  out.upper = std::sqrt(2.0) * out.lower;
  return out;
}

namespace {

Eigen::VectorXd stokes_residual(const GradientDiscretisation& gd,
                                const std::function<Vec2(const Vec2&)>& psi,
                                const std::function<double(const Vec2&)>& div_psi) {
  const SpMat P = gd.interior_columns(gd.reconstruction_map());
  const SpMat G = gd.interior_columns(gd.gradient_map());
  const auto& pi_layout = *gd.pi_layout();
  Eigen::VectorXd f_pi(pi_layout.n_nodes());
  for (int q = 0; q < pi_layout.n_nodes(); ++q)
    f_pi[q] = pi_layout.weight(q) * div_psi(pi_layout.point(q));
  const auto& g_layout = *gd.grad_layout();
  Eigen::VectorXd f_g(2 * g_layout.n_nodes());
  for (int q = 0; q < g_layout.n_nodes(); ++q) {
    const Vec2 gp = psi(g_layout.point(q));
    f_g[2 * q] = g_layout.weight(q) * gp.x();
    f_g[2 * q + 1] = g_layout.weight(q) * gp.y();
  }
  return G.transpose() * f_g + P.transpose() * f_pi;
}

}  // namespace

double limit_conformity_defect(const GradientDiscretisation& gd,
                               const std::function<Vec2(const Vec2&)>& psi,
                               const std::function<double(const Vec2&)>& div_psi,
                               const PencilOptions& opts) {
  if (gd.n_interior() == 0) return 0.0;
  const Eigen::VectorXd r = stokes_residual(gd, psi, div_psi);
  const SpMat K = gram_gradient(gd);
  if (opts.path == EigPath::Dense) {
    // brute-force oracle: the defect is the top eigenvalue of the rank-one
    // pencil (r r', K)
    SpMat R(r.size(), r.size());
    std::vector<Triplet> trip;
    for (int i = 0; i < r.size(); ++i)
      for (int j = 0; j < r.size(); ++j)
        if (r[i] * r[j] != 0.0) trip.emplace_back(i, j, r[i] * r[j]);
    R.setFromTriplets(trip.begin(), trip.end());
    return std::sqrt(std::max(0.0, pencil_lambda_max_dense(R, K)));
  }
  return std::sqrt(std::max(0.0, dual_norm_sq(K, r)));
}

double limit_conformity_lower_bound(const GradientDiscretisation& gd,
                                    const std::function<Vec2(const Vec2&)>& psi,
                                    const std::function<double(const Vec2&)>& div_psi, double p,
                                    int n_samples, std::uint64_t seed) {
  Rng rng(seed);
  const auto& pi_layout = *gd.pi_layout();
  const auto& g_layout = *gd.grad_layout();
  Eigen::VectorXd div_vals(pi_layout.n_nodes());
  for (int q = 0; q < pi_layout.n_nodes(); ++q)
    div_vals[q] = pi_layout.weight(q) * div_psi(pi_layout.point(q));
  Eigen::VectorXd psi_vals(2 * g_layout.n_nodes());
  for (int q = 0; q < g_layout.n_nodes(); ++q) {
    const Vec2 gp = psi(g_layout.point(q));
    psi_vals[2 * q] = g_layout.weight(q) * gp.x();
    psi_vals[2 * q + 1] = g_layout.weight(q) * gp.y();
  }
  double best = 0;
  for (int s = 0; s < n_samples; ++s) {
    DofVector u = DofVector::Zero(gd.n_dofs());
    for (int i : gd.interior_dofs()) u[i] = rng.next_symmetric();
    const auto [pu, gu] = evaluate(gd, u);
    const double denom = lp_norm(gu, p);
    if (denom == 0) continue;
    const double num = std::abs(psi_vals.dot(gu.values) + div_vals.dot(pu.values));
    best = std::max(best, num / denom);
  }
  return best;
}

ControlReport control_report(const GradientDiscretisation& gd, const PencilOptions& opts) {
  if (!gd.control) throw Error(gd.name() + ": no control attached");
  const ControlSpec& ctl = *gd.control;
  const PolytopalMesh& tmesh = *ctl.toolbox_mesh;
  const int nc = tmesh.n_cells();
  if (ctl.map.rows() != nc + tmesh.n_faces())
    throw Error(gd.name() + ": control map shape does not match its toolbox mesh");

  ControlReport out;
  const SpMat K = gram_gradient(gd);
  const SpMat Phi = gd.interior_columns(ctl.map);

  // ||Phi||: toolbox-seminorm quadratic form composed with the control
  {
    // difference matrix over (K, sigma) incidences with weights |sigma|/d
    std::vector<Triplet> trip;
    int row = 0;
    std::vector<double> wrow;
    for (int k = 0; k < nc; ++k)
      for (int s : tmesh.cell(k).faces) {
        const Face& f = tmesh.face(s);
        trip.emplace_back(row, nc + s, 1.0);
        trip.emplace_back(row, k, -1.0);
        wrow.push_back(f.measure / f.dist[f.side_of(k)]);
        ++row;
      }
    SpMat B(row, nc + tmesh.n_faces());
    B.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd sqw(row);
    for (int i = 0; i < row; ++i) sqw[i] = std::sqrt(wrow[i]);
    SpMat BPhi = sqw.asDiagonal() * (B * Phi);
    const SpMat Q = SpMat(BPhi.transpose()) * BPhi;
    out.phi_norm = std::sqrt(std::max(0.0, pencil_lambda_max(Q, K, opts).lambda));
  }

  // omega_pi: Gram of (reconstruction - toolbox reconstruction of the control)
  {
    const auto& layout = *gd.pi_layout();
    std::vector<Triplet> trip;
    for (int q = 0; q < layout.n_nodes(); ++q) trip.emplace_back(q, layout.cell_of(q), 1.0);
    SpMat S(layout.n_nodes(), nc + tmesh.n_faces());
    // note: the pi layout lives on the scheme's own mesh; its cells map
    // one-to-one onto the toolbox mesh cells for every control in scope
    S.setFromTriplets(trip.begin(), trip.end());
    SpMat D = gd.interior_columns(gd.reconstruction_map()) - S * Phi;
    SpMat Dw = sqrt_weights_scalar(layout).asDiagonal() * D;
    const SpMat Q = SpMat(Dw.transpose()) * Dw;
    out.omega_pi = std::sqrt(std::max(0.0, pencil_lambda_max(Q, K, opts).lambda));
  }

  // omega_grad: per-cell integral of the gradient vs the toolbox gradient of
  // the control, checked on every basis dof (exact by linearity)
  {
    const auto& layout = *gd.grad_layout();
    // per-cell integral operator applied to the gradient map
    std::vector<Triplet> trip;
    for (int q = 0; q < layout.n_nodes(); ++q) {
      trip.emplace_back(2 * layout.cell_of(q), 2 * q, layout.weight(q));
      trip.emplace_back(2 * layout.cell_of(q) + 1, 2 * q + 1, layout.weight(q));
    }
    SpMat Avg(2 * nc, 2 * layout.n_nodes());
    Avg.setFromTriplets(trip.begin(), trip.end());

    // toolbox gradient of the control, cell by cell, times |K|
    std::vector<Triplet> ttrip;
    for (int k = 0; k < nc; ++k)
      for (int s : tmesh.cell(k).faces) {
        const Face& f = tmesh.face(s);
        const Vec2 n = f.normal[f.side_of(k)];
        ttrip.emplace_back(2 * k, nc + s, f.measure * n.x());
        ttrip.emplace_back(2 * k + 1, nc + s, f.measure * n.y());
        ttrip.emplace_back(2 * k, k, -f.measure * n.x());
        ttrip.emplace_back(2 * k + 1, k, -f.measure * n.y());
      }
    SpMat Tgrad(2 * nc, nc + tmesh.n_faces());
    Tgrad.setFromTriplets(ttrip.begin(), ttrip.end());

    SpMat R = Avg * gd.interior_columns(gd.gradient_map()) - Tgrad * Phi;
    double worst = 0;
    for (int j = 0; j < R.outerSize(); ++j)
      for (SpMat::InnerIterator it(R, j); it; ++it) {
        const int k = int(it.row()) / 2;
        worst = std::max(worst, std::abs(it.value()) / tmesh.cell(k).measure);
      }
    out.omega_grad.max_residual = worst;
    out.omega_grad.certified_zero = worst <= 1e-12;
    if (!out.omega_grad.certified_zero) {
      // crude fallback: total mass of the mismatch operator
      double bound = 0;
      for (int j = 0; j < R.outerSize(); ++j)
        for (SpMat::InnerIterator it(R, j); it; ++it) bound += std::abs(it.value());
      out.omega_grad.bound = bound;
    }
  }
  return out;
}

double poincare_constant(const PolytopalMesh& mesh, const PencilOptions& opts) {
  const SpMat M = toolbox_mass_matrix(mesh);
  const SpMat N = toolbox_norm_matrix(mesh);
  return std::sqrt(std::max(0.0, pencil_lambda_max(M, N, opts).lambda));
}

}  // namespace gslab
