#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gslab/schemes.hpp"

using namespace gslab;

namespace {

SchemeBuild make(const std::string& name, const MeshPtr& mesh) {
  SchemeSpec spec;
  spec.kind = scheme_kind_from_string(name);
  return build_scheme(spec, mesh);
}

}  // namespace

TEST_CASE("interpolate samples the approximation points") {
  auto mesh = build_simplicial(2, 2, Vec2(0, 0), Vec2(1, 1));
  auto b = make("p1", mesh);
  auto zero = interpolate(b.gd, [](const Vec2&) { return 0.0; });
  CHECK(zero.norm() == 0.0);

  // all vertices of the two-triangle unit square are boundary vertices
  auto two = build_simplicial(1, 1, Vec2(0, 0), Vec2(1, 1));
  auto p1 = make("p1", two);
  auto v = interpolate(p1.gd, [](const Vec2& x) {
    return std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
  });
  CHECK(v.norm() == 0.0);
  CHECK(p1.gd.n_interior() == 0);

  CHECK_THROWS_AS(interpolate(b.gd, [](const Vec2& x) { return 1.0 / (x - x).norm(); }), Error);
}

TEST_CASE("evaluate is linear and hats reconstruct as expected") {
  auto mesh = build_simplicial(3, 3, Vec2(0, 0), Vec2(1, 1));
  auto b = make("p1", mesh);
  const auto& gd = b.gd;

  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    DofVector u(gd.n_dofs()), w(gd.n_dofs());
    for (int i = 0; i < gd.n_dofs(); ++i) {
      u[i] = rng.next_symmetric();
      w[i] = rng.next_symmetric();
    }
    const double a = rng.next_symmetric(), c = rng.next_symmetric();
    auto [pu, gu] = evaluate(gd, u);
    auto [pw, gw] = evaluate(gd, w);
    auto [pm, gm] = evaluate(gd, DofVector(a * u + c * w));
    CHECK((pm.values - a * pu.values - c * pw.values).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK((gm.values - a * gu.values - c * gw.values).lpNorm<Eigen::Infinity>() < 1e-12);
  }

  // a hat dof: reconstruction bounded by 1, gradient constant per cell
  int interior = gd.interior_dofs().front();
  DofVector hat = DofVector::Zero(gd.n_dofs());
  hat[interior] = 1.0;
  auto [ph, gh] = evaluate(gd, hat);
  CHECK(ph.values.maxCoeff() <= 1.0 + 1e-13);
  CHECK(ph.values.minCoeff() >= -1e-13);
  const auto& layout = *gd.grad_layout();
  for (int r = 0; r < layout.n_regions(); ++r) {
    const auto& region = layout.regions()[r];
    const Vec2 first = gh.at(region.first_node);
    for (int q = region.first_node; q < region.first_node + region.n_nodes; ++q)
      CHECK((gh.at(q) - first).norm() < 1e-12);
  }
}

TEST_CASE("lp_norm against closed forms") {
  auto mesh = build_simplicial(16, 16, Vec2(0, 0), Vec2(1, 1));
  auto b = make("p1", mesh);
  // ||grad phi||_2 for phi = sin(pi x) sin(pi y) equals pi/sqrt(2)
  auto v = interpolate(b.gd, [](const Vec2& x) {
    return std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
  });
  auto g = reconstruct_gradient(b.gd, v);
  CHECK(lp_norm(g, 2.0) == doctest::Approx(M_PI / std::sqrt(2.0)).epsilon(2e-3));

  ScalarField c{b.gd.pi_layout(), Eigen::VectorXd::Constant(b.gd.pi_layout()->n_nodes(), -2.5)};
  CHECK(lp_norm(c, 2.0) == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(lp_distance(c, [](const Vec2&) { return -2.5; }, 2.0) < 1e-14);
}

TEST_CASE("partition of unity at every reconstruction node") {
  auto cart = build_cartesian(3, 3, Vec2(0, 0), Vec2(1, 1));
  auto simp = build_simplicial(3, 3, Vec2(0, 0), Vec2(1, 1));
  for (const auto& kind : {"p1", "p2", "p1_lumped", "ncp1", "ncp1_lumped", "mpfa_o", "hmm",
                           "sushi", "nmfd", "vag2d"}) {
    const MeshPtr mesh = (std::string(kind) == "p1" || std::string(kind) == "p2" ||
                          std::string(kind) == "p1_lumped" || std::string(kind) == "ncp1" ||
                          std::string(kind) == "ncp1_lumped")
                             ? simp
                             : cart;
    auto b = make(kind, mesh);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(b.gd.n_dofs());
    Eigen::VectorXd sums = b.gd.reconstruction_map() * ones;
    INFO(kind);
    CHECK((sums.array() - 1.0).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("lle regularity: piecewise-constant coefficients contribute one") {
  auto mesh = build_cartesian(3, 3, Vec2(0, 0), Vec2(1, 1));
  auto b = make("hmm", mesh);
  const SpMat& P = b.gd.reconstruction_map();
  Eigen::VectorXd abs_sums = Eigen::VectorXd::Zero(P.rows());
  for (int j = 0; j < P.outerSize(); ++j)
    for (SpMat::InnerIterator it(P, j); it; ++it) abs_sums[it.row()] += std::abs(it.value());
  CHECK((abs_sums.array() - 1.0).abs().maxCoeff() < 1e-13);
  CHECK(lle_regularity(b.gd) > 1.0);
}

TEST_CASE("lle regularity bounded under refinement") {
  for (const auto& kind : {"p1", "ncp1", "hmm", "nmfd", "vag2d", "mpfa_o"}) {
    double prev = 0;
    for (int level = 0; level < 3; ++level) {
      const int n = 2 << level;
      const MeshPtr mesh = (std::string(kind) == "p1" || std::string(kind) == "ncp1")
                               ? build_simplicial(n, n, Vec2(0, 0), Vec2(1, 1))
                               : build_cartesian(n, n, Vec2(0, 0), Vec2(1, 1));
      auto b = make(kind, mesh);
      const double reg = lle_regularity(b.gd);
      INFO(kind << " level " << level << " reg " << reg);
      CHECK(std::isfinite(reg));
      if (level > 0) CHECK(reg <= prev * 1.01);
      prev = reg;
    }
  }
}

TEST_CASE("dof points inside their region keep the distance term small") {
  auto mesh = build_simplicial(2, 2, Vec2(0, 0), Vec2(1, 1));
  auto b = make("p1", mesh);
  for (const auto& reg : b.gd.lle->regions)
    for (double d : reg.dist) CHECK(d <= reg.diam);
}

TEST_CASE("gradient bound check for interpolants of smooth functions") {
  auto mesh = build_simplicial(4, 4, Vec2(0, 0), Vec2(1, 1));
  auto b = make("p1", mesh);

  // affine: reconstruction error is zero
  auto affine_reports = lle_gradient_bound_check(
      b.gd, [](const Vec2& x) { return 1.0 + 2.0 * x.x() - 0.5 * x.y(); },
      [](const Vec2&) { return Vec2(2.0, -0.5); }, 0.0);
  for (const auto& r : affine_reports) {
    CHECK(r.max_error < 1e-12);
    CHECK(r.ok);
  }

  // quadratic x^2/2: second derivatives bounded by 1
  auto quad_reports = lle_gradient_bound_check(
      b.gd, [](const Vec2& x) { return 0.5 * x.x() * x.x(); },
      [](const Vec2& x) { return Vec2(x.x(), 0.0); }, 1.0);
  for (const auto& r : quad_reports) CHECK(r.ok);

  // trig with W^{2,inf} norm pi^2, across all scheme builders
  auto cart = build_cartesian(4, 4, Vec2(0, 0), Vec2(1, 1));
  for (const auto& kind : {"p1", "p2", "ncp1", "mpfa_o", "hmm", "nmfd", "vag2d", "sushi"}) {
    const MeshPtr mesh2 = (std::string(kind) == "p1" || std::string(kind) == "p2" ||
                           std::string(kind) == "ncp1")
                              ? mesh
                              : cart;
    auto bb = make(kind, mesh2);
    auto reports = lle_gradient_bound_check(
        bb.gd,
        [](const Vec2& x) { return std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()); },
        [](const Vec2& x) {
          return Vec2(M_PI * std::cos(M_PI * x.x()) * std::sin(M_PI * x.y()),
                      M_PI * std::sin(M_PI * x.x()) * std::cos(M_PI * x.y()));
        },
        M_PI * M_PI);
    INFO(kind);
    for (const auto& r : reports) CHECK(r.ok);
  }
}

TEST_CASE("quadrature layouts tile the domain") {
  auto cart = build_cartesian(3, 2, Vec2(0, 0), Vec2(2, 1));
  auto simp = build_simplicial(3, 2, Vec2(0, 0), Vec2(2, 1));
  for (const auto& kind : {"p1", "p1_lumped", "ncp1_lumped", "mpfa_o", "hmm", "nmfd", "vag2d"}) {
    const bool needs_simplicial = std::string(kind) == "p1" || std::string(kind) == "p1_lumped" ||
                                  std::string(kind) == "ncp1_lumped";
    auto b = make(kind, needs_simplicial ? simp : cart);
    INFO(kind);
    CHECK(b.gd.pi_layout()->total_measure() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(b.gd.grad_layout()->total_measure() == doctest::Approx(2.0).epsilon(1e-12));
    for (const auto& region : b.gd.grad_layout()->regions()) {
      double w = 0;
      for (int q = region.first_node; q < region.first_node + region.n_nodes; ++q)
        w += b.gd.grad_layout()->weight(q);
      CHECK(w == doctest::Approx(region.measure).epsilon(1e-12));
    }
  }
}
