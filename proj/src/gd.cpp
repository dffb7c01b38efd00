#include "gslab/gd.hpp"

#include <cmath>

namespace gslab {

GradientDiscretisation::GradientDiscretisation(std::string name, MeshPtr mesh,
                                               std::vector<Vec2> points,
                                               std::vector<bool> boundary, LayoutPtr pi_layout,
                                               LayoutPtr grad_layout, SpMat reconstruction,
                                               SpMat gradient)
    : m_name(std::move(name)),
      m_mesh(std::move(mesh)),
      m_points(std::move(points)),
      m_boundary(std::move(boundary)),
      m_pi_layout(std::move(pi_layout)),
      m_grad_layout(std::move(grad_layout)),
      m_P(std::move(reconstruction)),
      m_G(std::move(gradient)) {
  if (m_P.rows() != m_pi_layout->n_nodes() || m_P.cols() != n_dofs())
    throw Error(m_name + ": reconstruction map has wrong shape");
  if (m_G.rows() != 2 * m_grad_layout->n_nodes() || m_G.cols() != n_dofs())
    throw Error(m_name + ": gradient map has wrong shape");
  for (int i = 0; i < n_dofs(); ++i)
    if (!m_boundary[i]) m_interior.push_back(i);
}

SpMat GradientDiscretisation::interior_columns(const SpMat& m) const {
  SpMat sel(n_dofs(), n_interior());
  std::vector<Triplet> trip;
  trip.reserve(n_interior());
  for (int j = 0; j < n_interior(); ++j) trip.emplace_back(m_interior[j], j, 1.0);
  sel.setFromTriplets(trip.begin(), trip.end());
  return m * sel;
}

DofVector GradientDiscretisation::extend(const Eigen::VectorXd& interior_values) const {
  if (interior_values.size() != n_interior())
    throw Error(m_name + ": interior vector has wrong length");
  DofVector full = DofVector::Zero(n_dofs());
  for (int j = 0; j < n_interior(); ++j) full[m_interior[j]] = interior_values[j];
  return full;
}

Eigen::VectorXd GradientDiscretisation::restrict(const DofVector& full) const {
  if (full.size() != n_dofs()) throw Error(m_name + ": dof vector has wrong length");
  Eigen::VectorXd out(n_interior());
  for (int j = 0; j < n_interior(); ++j) out[j] = full[m_interior[j]];
  return out;
}

DofVector interpolate(const GradientDiscretisation& gd,
                      const std::function<double(const Vec2&)>& f, bool zero_boundary) {
  DofVector v(gd.n_dofs());
  for (int i = 0; i < gd.n_dofs(); ++i) {
    const double value = f(gd.point(i));
    if (!std::isfinite(value))
      throw Error("interpolate: function not finite at dof " + std::to_string(i));
    v[i] = (zero_boundary && gd.is_boundary_dof(i)) ? 0.0 : value;
  }
  return v;
}

ScalarField reconstruct(const GradientDiscretisation& gd, const DofVector& u) {
  if (u.size() != gd.n_dofs()) throw Error(gd.name() + ": dof vector has wrong length");
  return ScalarField{gd.pi_layout(), gd.reconstruction_map() * u};
}

VectorField reconstruct_gradient(const GradientDiscretisation& gd, const DofVector& u) {
  if (u.size() != gd.n_dofs()) throw Error(gd.name() + ": dof vector has wrong length");
  return VectorField{gd.grad_layout(), gd.gradient_map() * u};
}

std::pair<ScalarField, VectorField> evaluate(const GradientDiscretisation& gd,
                                             const DofVector& u) {
  return {reconstruct(gd, u), reconstruct_gradient(gd, u)};
}

double lle_regularity(const GradientDiscretisation& gd) {
  if (!gd.lle) throw Error(gd.name() + ": no locally-linearly-exact structure attached");
  double region_term = 0;
  for (const LleRegion& r : gd.lle->regions) {
    double far = 0;
    for (double d : r.dist) far = std::max(far, d / r.diam);
    region_term = std::max(region_term, r.gradient_norm + far);
  }
  // esssup of the absolute coefficient sum, sampled at the quadrature nodes
  double alpha_sum = 0;
  const SpMat& P = gd.reconstruction_map();
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(P.rows());
  for (int j = 0; j < P.outerSize(); ++j)
    for (SpMat::InnerIterator it(P, j); it; ++it) row_sums[it.row()] += std::abs(it.value());
  for (int q = 0; q < row_sums.size(); ++q) alpha_sum = std::max(alpha_sum, row_sums[q]);
  return region_term + alpha_sum;
}

std::vector<LleBoundReport> lle_gradient_bound_check(
    const GradientDiscretisation& gd, const std::function<double(const Vec2&)>& phi,
    const std::function<Vec2(const Vec2&)>& grad_phi, double w2inf_norm) {
  if (!gd.lle) throw Error(gd.name() + ": no locally-linearly-exact structure attached");
  const DofVector v = interpolate(gd, phi, /*zero_boundary=*/false);
  const VectorField g = reconstruct_gradient(gd, v);
  const auto& layout = *gd.grad_layout();

  std::vector<LleBoundReport> reports(gd.lle->regions.size());
  for (std::size_t r = 0; r < reports.size(); ++r) {
    const LleRegion& reg = gd.lle->regions[r];
    double far = 0;
    for (double d : reg.dist) far = std::max(far, d / reg.diam);
    reports[r].region = int(r);
    reports[r].bound =
        (1.0 + 0.5 * reg.gradient_norm * (far + 1.0) * (far + 1.0)) * reg.diam * w2inf_norm;
  }
  for (int q = 0; q < layout.n_nodes(); ++q) {
    const int lr = layout.regions()[layout.region_of(q)].lle_region;
    if (lr < 0) continue;
    const double err = (g.at(q) - grad_phi(layout.point(q))).norm();
    reports[lr].max_error = std::max(reports[lr].max_error, err);
  }
  for (auto& rep : reports) rep.ok = rep.max_error <= rep.bound * (1.0 + 1e-12);
  return reports;
}

double gradient_matrix_norm(const Eigen::Matrix2Xd& cols, double diam, bool* is_bound) {
  const int n = int(cols.cols());
  if (n <= 12) {
    // exact: the max over the unit max-norm ball of a convex function is
    // attained at a sign pattern
    double best = 0;
    const std::uint64_t half = 1ULL << (n > 0 ? n - 1 : 0);
    for (std::uint64_t mask = 0; mask < half; ++mask) {
      Vec2 acc = cols.col(0);
      for (int j = 1; j < n; ++j) {
        if ((mask >> (j - 1)) & 1)
          acc -= cols.col(j);
        else
          acc += cols.col(j);
      }
      best = std::max(best, acc.norm());
    }
    if (is_bound) *is_bound = false;
    return diam * best;
  }
  double bound = 0;
  for (int j = 0; j < n; ++j) bound += cols.col(j).norm();
  if (is_bound) *is_bound = true;
  return diam * bound;
}

}  // namespace gslab
