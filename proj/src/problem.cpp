#include "gslab/problem.hpp"

#include <cmath>

namespace gslab {

namespace {

DiffusionProblem sin2d() {
  DiffusionProblem p;
  p.name = "sin2d";
  p.tensor = [](const Vec2&) { return Mat2::Identity(); };
  p.exact = [](const Vec2& x) { return std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()); };
  p.exact_grad = [](const Vec2& x) {
    return Vec2(M_PI * std::cos(M_PI * x.x()) * std::sin(M_PI * x.y()),
                M_PI * std::sin(M_PI * x.x()) * std::cos(M_PI * x.y()));
  };
  p.exact_flux = p.exact_grad;
  p.source = [](const Vec2& x) {
    return 2.0 * M_PI * M_PI * std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
  };
  return p;
}

DiffusionProblem aniso() {
  DiffusionProblem p = sin2d();
  p.name = "aniso";
  p.tensor = [](const Vec2&) {
    Mat2 a = Mat2::Zero();
    a(0, 0) = 1.0;
    a(1, 1) = 100.0;
    return a;
  };
  p.exact_flux = [](const Vec2& x) {
    return Vec2(M_PI * std::cos(M_PI * x.x()) * std::sin(M_PI * x.y()),
                100.0 * M_PI * std::sin(M_PI * x.x()) * std::cos(M_PI * x.y()));
  };
  p.source = [](const Vec2& x) {
    return 101.0 * M_PI * M_PI * std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
  };
  return p;
}

// piecewise scalar diffusion k1 for x < 1/2, k2 beyond, with the solution
// U(x) sin(pi y) built to keep both the value and the normal flux continuous
// across the interface
struct HeteroProfile {
  static constexpr double k1 = 1.0;
  static constexpr double k2 = 100.0;
  // U1 = x on [0, 1/2]; U2 = a (1-x) + b (1-x)^2 on [1/2, 1]
  static constexpr double a = 201.0 / 100.0;
  static constexpr double b = -101.0 / 50.0;

  static double k(const Vec2& x) { return x.x() < 0.5 ? k1 : k2; }
  static double U(double x) { return x < 0.5 ? x : a * (1.0 - x) + b * (1.0 - x) * (1.0 - x); }
  static double dU(double x) { return x < 0.5 ? 1.0 : -a - 2.0 * b * (1.0 - x); }
  static double d2U(double x) { return x < 0.5 ? 0.0 : 2.0 * b; }
};

DiffusionProblem hetero() {
  DiffusionProblem p;
  p.name = "hetero";
  using H = HeteroProfile;
  p.tensor = [](const Vec2& x) { return Mat2(H::k(x) * Mat2::Identity()); };
  p.exact = [](const Vec2& x) { return H::U(x.x()) * std::sin(M_PI * x.y()); };
  p.exact_grad = [](const Vec2& x) {
    return Vec2(H::dU(x.x()) * std::sin(M_PI * x.y()),
                H::U(x.x()) * M_PI * std::cos(M_PI * x.y()));
  };
  p.exact_flux = [](const Vec2& x) {
    return Vec2(H::k(x) * H::dU(x.x()) * std::sin(M_PI * x.y()),
                H::k(x) * H::U(x.x()) * M_PI * std::cos(M_PI * x.y()));
  };
  p.source = [](const Vec2& x) {
    return H::k(x) * (M_PI * M_PI * H::U(x.x()) - H::d2U(x.x())) * std::sin(M_PI * x.y());
  };
  return p;
}

DiffusionProblem cubic_beta() {
  DiffusionProblem p = sin2d();
  p.name = "cubic_beta";
  p.beta = [](double s) { return s * s * s; };
  p.beta_prime = [](double s) { return 3.0 * s * s; };
  const auto u = p.exact;
  const auto f0 = p.source;
  p.source = [u, f0](const Vec2& x) {
    const double v = u(x);
    return f0(x) + v * v * v;
  };
  return p;
}

}  // namespace

DiffusionProblem make_problem(const std::string& name) {
  if (name == "sin2d") return sin2d();
  if (name == "aniso") return aniso();
  if (name == "hetero") return hetero();
  if (name == "cubic_beta") return cubic_beta();
  throw Error("unknown problem: " + name);
}

std::vector<std::string> problem_names() { return {"sin2d", "aniso", "hetero", "cubic_beta"}; }

const std::vector<TestFunction>& consistency_bank() {
  static const std::vector<TestFunction> bank = {
      {"sinsin",
       [](const Vec2& x) { return std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()); },
       [](const Vec2& x) {
         return Vec2(M_PI * std::cos(M_PI * x.x()) * std::sin(M_PI * x.y()),
                     M_PI * std::sin(M_PI * x.x()) * std::cos(M_PI * x.y()));
       }},
      {"bump4",
       [](const Vec2& x) { return x.x() * (1 - x.x()) * x.y() * (1 - x.y()); },
       [](const Vec2& x) {
         return Vec2((1 - 2 * x.x()) * x.y() * (1 - x.y()),
                     x.x() * (1 - x.x()) * (1 - 2 * x.y()));
       }},
      {"bump8",
       [](const Vec2& x) {
         const double b = x.x() * (1 - x.x()) * x.y() * (1 - x.y());
         return b * b;
       },
       [](const Vec2& x) {
         const double b = x.x() * (1 - x.x()) * x.y() * (1 - x.y());
         return Vec2(2 * b * (1 - 2 * x.x()) * x.y() * (1 - x.y()),
                     2 * b * x.x() * (1 - x.x()) * (1 - 2 * x.y()));
       }},
  };
  return bank;
}

const std::vector<TestField>& conformity_bank() {
  static const std::vector<TestField> bank = {
      {"rot_sin",
       [](const Vec2& x) { return Vec2(std::sin(M_PI * x.y()), std::sin(M_PI * x.x())); },
       [](const Vec2&) { return 0.0; }},
      {"poly3",
       [](const Vec2& x) {
         return Vec2(x.x() * x.x() * x.y() - x.y(), x.x() * x.y() * x.y() + 3.0);
       },
       [](const Vec2& x) { return 4.0 * x.x() * x.y(); }},
      {"shear",
       [](const Vec2& x) { return Vec2(0.5 * x.y() * x.y(), x.x() * x.x() - 0.25 * x.y()); },
       [](const Vec2&) { return -0.25; }},
  };
  return bank;
}

}  // namespace gslab
