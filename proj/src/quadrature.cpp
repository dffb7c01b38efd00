#include "gslab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace gslab {

namespace {

// Gauss-Legendre nodes/weights on [0,1], by Newton iteration on P_n.
void gauss_legendre01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    // initial guess on [-1,1]
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      // evaluate P_n and P_n' at t by recurrence
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[i] = 0.5 * (t + 1.0);
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);  // weight 2/((1-t^2)P_n'^2) scaled by 1/2
  }
}

// Gauss-Jacobi rule with weight (1-y) on [0,1] (alpha=1, beta=0 on [-1,1]),
// via Golub-Welsch on the symmetric Jacobi matrix.
void gauss_jacobi10_01(int n, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    J(k, k) = -1.0 / ((2.0 * k + 1.0) * (2.0 * k + 3.0));
    if (k > 0) {
      double e = std::sqrt(double(k) * (k + 1.0)) / (2.0 * k + 1.0);
      J(k, k - 1) = e;
      J(k - 1, k) = e;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(n);
  w.resize(n);
  const double mu0 = 2.0;  // integral of (1-t) over [-1,1]
  for (int i = 0; i < n; ++i) {
    double t = es.eigenvalues()[i];
    double v0 = es.eigenvectors()(0, i);
    x[i] = 0.5 * (t + 1.0);
    // map weight to [0,1] with weight function (1-y): factor 1/4
    w[i] = mu0 * v0 * v0 / 4.0;
  }
}

TriangleRule make_conical_rule(int degree) {
  int n = degree / 2 + 1;  // exact to 2n-1 >= degree
  std::vector<double> gx, gw, jx, jw;
  gauss_legendre01(n, gx, gw);
  gauss_jacobi10_01(n, jx, jw);
  TriangleRule rule;
  rule.degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // x = xi (1 - eta), y = eta; Jacobian absorbs the (1-eta) weight
      rule.points.emplace_back(gx[i] * (1.0 - jx[j]), jx[j]);
      rule.weights.push_back(gw[i] * jw[j]);
    }
  }
  return rule;
}

}  // namespace

const TriangleRule& triangle_rule(int degree) {
  static std::mutex mtx;
  static std::map<int, TriangleRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(degree);
  if (it == cache.end()) it = cache.emplace(degree, make_conical_rule(degree)).first;
  return it->second;
}

int QuadratureLayout::add_region(int cell, const std::vector<std::array<Vec2, 3>>& triangles,
                                 int degree) {
  const TriangleRule& rule = triangle_rule(degree);
  QuadRegion region;
  region.cell = cell;
  region.first_node = n_nodes();
  int id = n_regions();
  for (const auto& tri : triangles) {
    const Vec2& a = tri[0];
    const Vec2 e1 = tri[1] - tri[0];
    const Vec2 e2 = tri[2] - tri[0];
    const double jac = std::abs(e1.x() * e2.y() - e1.y() * e2.x());
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      m_points.push_back(a + rule.points[q].x() * e1 + rule.points[q].y() * e2);
      m_weights.push_back(rule.weights[q] * jac);
      m_region_of_node.push_back(id);
      region.measure += m_weights.back();
      ++region.n_nodes;
    }
  }
  m_regions.push_back(region);
  return id;
}

int QuadratureLayout::add_point_mass(int cell, const Vec2& point, double measure) {
  QuadRegion region;
  region.cell = cell;
  region.first_node = n_nodes();
  region.n_nodes = 1;
  region.measure = measure;
  int id = n_regions();
  m_points.push_back(point);
  m_weights.push_back(measure);
  m_region_of_node.push_back(id);
  m_regions.push_back(region);
  return id;
}

double QuadratureLayout::total_measure() const {
  double s = 0;
  for (double w : m_weights) s += w;
  return s;
}

double lp_norm(const ScalarField& f, double p) {
  double s = 0;
  for (int q = 0; q < f.layout->n_nodes(); ++q)
    s += f.layout->weight(q) * std::pow(std::abs(f.values[q]), p);
  return std::pow(s, 1.0 / p);
}

double lp_norm(const VectorField& f, double p) {
  double s = 0;
  for (int q = 0; q < f.layout->n_nodes(); ++q)
    s += f.layout->weight(q) * std::pow(f.at(q).norm(), p);
  return std::pow(s, 1.0 / p);
}

double lp_distance(const ScalarField& f, const std::function<double(const Vec2&)>& g, double p) {
  double s = 0;
  for (int q = 0; q < f.layout->n_nodes(); ++q)
    s += f.layout->weight(q) * std::pow(std::abs(f.values[q] - g(f.layout->point(q))), p);
  return std::pow(s, 1.0 / p);
}

double lp_distance(const VectorField& f, const std::function<Vec2(const Vec2&)>& g, double p) {
  double s = 0;
  for (int q = 0; q < f.layout->n_nodes(); ++q)
    s += f.layout->weight(q) * std::pow((f.at(q) - g(f.layout->point(q))).norm(), p);
  return std::pow(s, 1.0 / p);
}

double lp_distance(const ScalarField& f, const ScalarField& g, double p) {
  if (f.layout != g.layout && f.layout->n_nodes() != g.layout->n_nodes())
    throw Error("lp_distance: mismatched quadrature layouts");
  double s = 0;
  for (int q = 0; q < f.layout->n_nodes(); ++q)
    s += f.layout->weight(q) * std::pow(std::abs(f.values[q] - g.values[q]), p);
  return std::pow(s, 1.0 / p);
}

double integrate(const QuadratureLayout& layout, const std::function<double(const Vec2&)>& f) {
  double s = 0;
  for (int q = 0; q < layout.n_nodes(); ++q) s += layout.weight(q) * f(layout.point(q));
  return s;
}

}  // namespace gslab
