#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gslab/toolbox.hpp"

using namespace gslab;

TEST_CASE("reconstruction is the cell value") {
  auto mesh = build_cartesian(2, 2, Vec2(0, 0), Vec2(1, 1));
  ToolboxVector v = ToolboxVector::zero(*mesh);
  CHECK(toolbox_reconstruction(*mesh, v).norm() == 0.0);

  for (int k = 0; k < mesh->n_cells(); ++k) v.cells[k] = k;
  for (int s = 0; s < mesh->n_faces(); ++s) v.faces[s] = 77.0;  // arbitrary
  auto field = toolbox_reconstruction(*mesh, v);
  for (int k = 0; k < 4; ++k) CHECK(field[k] == double(k));

  v.cells.setOnes();
  CHECK((toolbox_reconstruction(*mesh, v).array() - 1.0).abs().maxCoeff() == 0.0);
}

TEST_CASE("gradient: defining sum, both forms, affine exactness") {
  auto mesh = build_cartesian(1, 1, Vec2(0, 0), Vec2(1, 1));
  ToolboxVector v = ToolboxVector::zero(*mesh);
  // find the right face (normal +x) and set it to 1
  for (int s = 0; s < mesh->n_faces(); ++s)
    if (mesh->face(s).normal[0].x() > 0.9) v.faces[s] = 1.0;
  auto g = toolbox_gradient(*mesh, v);
  CHECK((g.col(0) - Vec2(1, 0)).norm() < 1e-14);

  // both forms of the defining sum agree
  auto mesh2 = perturb(*build_cartesian(4, 4, Vec2(0, 0), Vec2(1, 1)), 0.2, 3);
  Rng rng(1);
  ToolboxVector w = ToolboxVector::zero(*mesh2);
  for (int k = 0; k < mesh2->n_cells(); ++k) w.cells[k] = rng.next_symmetric();
  for (int s = 0; s < mesh2->n_faces(); ++s)
    if (!mesh2->face(s).boundary()) w.faces[s] = rng.next_symmetric();
  auto g1 = toolbox_gradient(*mesh2, w);
  auto g2 = toolbox_gradient_face_only(*mesh2, w);
  CHECK((g1 - g2).cwiseAbs().maxCoeff() < 1e-12);

  // affine face interpolant reproduces the slope on every cell
  const Vec2 slope(0.8, -1.7);
  ToolboxVector a = ToolboxVector::zero(*mesh2);
  for (int s = 0; s < mesh2->n_faces(); ++s) a.faces[s] = slope.dot(mesh2->face(s).center);
  auto ga = toolbox_gradient(*mesh2, a);
  for (int k = 0; k < mesh2->n_cells(); ++k) CHECK((ga.col(k) - slope).norm() < 1e-12);

  // linearity
  auto mix = ToolboxVector{2.0 * w.cells + 3.0 * a.cells, 2.0 * w.faces + 3.0 * a.faces};
  auto gm = toolbox_gradient(*mesh2, mix);
  CHECK((gm - 2.0 * g1 - 3.0 * ga).cwiseAbs().maxCoeff() < 1e-12);

  // constant interior interpolant: zero gradient on cells with no boundary face
  ToolboxVector c = ToolboxVector::zero(*mesh2);
  c.cells.setConstant(4.0);
  for (int s = 0; s < mesh2->n_faces(); ++s)
    if (!mesh2->face(s).boundary()) c.faces[s] = 4.0;
  auto gc = toolbox_gradient(*mesh2, c);
  for (int k = 0; k < mesh2->n_cells(); ++k) {
    bool touches_boundary = false;
    for (int s : mesh2->cell(k).faces)
      if (mesh2->face(s).boundary()) touches_boundary = true;
    if (!touches_boundary) CHECK(gc.col(k).norm() < 1e-13);
  }
}

TEST_CASE("discrete norm: hand value and gradient domination") {
  auto mesh = build_cartesian(1, 1, Vec2(0, 0), Vec2(1, 1));
  ToolboxVector v = ToolboxVector::zero(*mesh);
  CHECK(toolbox_norm(*mesh, v, 2.0) == 0.0);

  // norms are positive even with all face values zero
  v.cells[0] = 1.0;
  // ||v||^2 = sum |sigma| d |v_K/d|^2 = 4 * (1 * 0.5) * 4 = 8
  CHECK(toolbox_norm(*mesh, v, 2.0) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-13));

  // the gradient is zero for this v although v != 0: the toolbox gradient
  // norm alone does not separate points
  CHECK(toolbox_gradient_lp(*mesh, v, 2.0) == 0.0);

  // ||grad_T v||_p <= d^{(p-1)/p} ||v||_{T,0,p} on random vectors
  auto mesh2 = perturb(*build_cartesian(5, 5, Vec2(0, 0), Vec2(1, 1)), 0.15, 9);
  Rng rng(17);
  for (double p : {1.5, 2.0, 3.0}) {
    for (int trial = 0; trial < 100; ++trial) {
      ToolboxVector w = ToolboxVector::zero(*mesh2);
      for (int k = 0; k < mesh2->n_cells(); ++k) w.cells[k] = rng.next_symmetric();
      for (int s = 0; s < mesh2->n_faces(); ++s)
        if (!mesh2->face(s).boundary()) w.faces[s] = rng.next_symmetric();
      const double lhs = toolbox_gradient_lp(*mesh2, w, p);
      const double rhs = std::pow(2.0, (p - 1.0) / p) * toolbox_norm(*mesh2, w, p);
      CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
  }

  CHECK_THROWS_AS(toolbox_norm(*mesh, v, 1.0), Error);
}

TEST_CASE("stokes defect: zero vector, constant field, affine interpolants") {
  auto mesh = build_cartesian(4, 4, Vec2(0, 0), Vec2(1, 1));
  ToolboxVector zero = ToolboxVector::zero(*mesh);
  auto psi = [](const Vec2& x) { return Vec2(std::sin(M_PI * x.y()), std::sin(M_PI * x.x())); };
  auto div_psi = [](const Vec2&) { return 0.0; };
  CHECK(stokes_defect(*mesh, zero, psi, div_psi) == 0.0);

  // constant field: defect equals |psi . sum_K |K| grad_T v|
  Rng rng(3);
  ToolboxVector v = ToolboxVector::zero(*mesh);
  for (int k = 0; k < mesh->n_cells(); ++k) v.cells[k] = rng.next_symmetric();
  for (int s = 0; s < mesh->n_faces(); ++s)
    if (!mesh->face(s).boundary()) v.faces[s] = rng.next_symmetric();
  const Vec2 cpsi(0.3, -1.2);
  auto g = toolbox_gradient(*mesh, v);
  Vec2 total = Vec2::Zero();
  for (int k = 0; k < mesh->n_cells(); ++k) total += mesh->cell(k).measure * g.col(k);
  const double defect = stokes_defect(
      *mesh, v, [&](const Vec2&) { return cpsi; }, [](const Vec2&) { return 0.0; });
  CHECK(defect == doctest::Approx(std::abs(cpsi.dot(total))).epsilon(1e-11));

  // refinement: defect of affine interpolants decays within the stated bound
  auto phi = [](const Vec2& x) { return x.x() * (1.0 - x.x()) + 0.5 * x.y(); };
  double norm_psi_w1inf = 1.0 + M_PI;  // sup |psi| + sup |Dpsi| for the trig field
  for (int n : {4, 8, 16}) {
    auto m = build_cartesian(n, n, Vec2(0, 0), Vec2(1, 1));
    auto vv = toolbox_interpolate(*m, phi);
    const double d = stokes_defect(*m, vv, psi, div_psi);
    const double bound = std::sqrt(2.0 * 1.0) * norm_psi_w1inf *
                         toolbox_norm(*m, vv, 2.0) * mesh_stats(*m).h_max;
    CHECK(d <= bound);
  }
}
