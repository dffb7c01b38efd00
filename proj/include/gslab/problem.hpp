#ifndef GSLAB_PROBLEM_HPP
#define GSLAB_PROBLEM_HPP

#include <functional>
#include <string>
#include <vector>

#include "gslab/common.hpp"

namespace gslab {

/// Steady diffusion problem -div(A grad u) + beta(u) = f with homogeneous
/// Dirichlet data, optionally manufactured (exact solution and flux known).
struct DiffusionProblem {
  std::string name;
  std::function<Mat2(const Vec2&)> tensor;   ///< A(x), symmetric positive definite
  std::function<double(const Vec2&)> source; ///< f

  std::function<double(double)> beta;        ///< null for linear problems
  std::function<double(double)> beta_prime;

  std::function<double(const Vec2&)> exact;      ///< null when not manufactured
  std::function<Vec2(const Vec2&)> exact_grad;
  std::function<Vec2(const Vec2&)> exact_flux;   ///< A grad u; div = -f + beta(u)

  bool semilinear() const { return bool(beta); }
  bool manufactured() const { return bool(exact); }
};

/// Built-in problems on the unit square:
///   sin2d      - A = I, u = sin(pi x) sin(pi y)
///   aniso      - A = diag(1, 100), same solution
///   hetero     - A = k(x) I jumping at x = 1/2, flux-continuous solution
///   cubic_beta - A = I plus the monotone zero-order term beta(s) = s^3
DiffusionProblem make_problem(const std::string& name);
std::vector<std::string> problem_names();

/// Named consistency test functions (vanishing on the unit-square boundary)
/// with analytic gradients.
struct TestFunction {
  std::string name;
  std::function<double(const Vec2&)> value;
  std::function<Vec2(const Vec2&)> grad;
};
const std::vector<TestFunction>& consistency_bank();

/// Named flux fields with analytic divergence for the Stokes-residual
/// measures.
struct TestField {
  std::string name;
  std::function<Vec2(const Vec2&)> value;
  std::function<double(const Vec2&)> div;
};
const std::vector<TestField>& conformity_bank();

}  // namespace gslab

#endif
