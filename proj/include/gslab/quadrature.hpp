#ifndef GSLAB_QUADRATURE_HPP
#define GSLAB_QUADRATURE_HPP

#include <functional>
#include <memory>
#include <vector>

#include "gslab/common.hpp"

namespace gslab {

/// Quadrature rule on the reference triangle (0,0),(1,0),(0,1).
/// Weights sum to 1/2 (the reference area).
struct TriangleRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int degree = 0;  ///< total polynomial degree integrated exactly
};

/// Conical-product Gauss rule on the reference triangle, exact for all
/// polynomials of total degree <= 2n-1 with n points per direction.
/// Rules are cached; the returned reference stays valid for the process
/// lifetime.
const TriangleRule& triangle_rule(int degree);

/// Default rule degree used by all scheme builders. High enough that every
/// polynomial pairing appearing in assembly and in the quality measures is
/// integrated exactly, and that smooth-field functionals reach ~1e-12.
inline constexpr int kDefaultQuadDegree = 11;

/// One integration region: a connected piece of a cell over which the field
/// being tabulated is structurally simple (constant or polynomial).
struct QuadRegion {
  int cell = -1;        ///< owning mesh cell
  double measure = 0;   ///< area of the region
  int first_node = 0;   ///< index of the first node in the layout arrays
  int n_nodes = 0;
  int lle_region = -1;  ///< index into the owning LLE structure, if any
};

/// A fixed set of integration points grouped into regions. Reconstructed
/// functions and gradients are represented by their values at these nodes.
class QuadratureLayout {
public:
  /// Appends a region made of physical triangles, sampled with the cached
  /// rule of the given degree. Returns the region index.
  int add_region(int cell, const std::vector<std::array<Vec2, 3>>& triangles,
                 int degree = kDefaultQuadDegree);

  /// Appends a region represented by a single point mass.
  int add_point_mass(int cell, const Vec2& point, double measure);

  int n_nodes() const { return int(m_points.size()); }
  int n_regions() const { return int(m_regions.size()); }

  const std::vector<QuadRegion>& regions() const { return m_regions; }
  std::vector<QuadRegion>& regions() { return m_regions; }
  const Vec2& point(int q) const { return m_points[q]; }
  double weight(int q) const { return m_weights[q]; }
  int region_of(int q) const { return m_region_of_node[q]; }
  int cell_of(int q) const { return m_regions[m_region_of_node[q]].cell; }

  double total_measure() const;

  const std::vector<double>& weights() const { return m_weights; }
  const std::vector<Vec2>& points() const { return m_points; }

private:
  std::vector<QuadRegion> m_regions;
  std::vector<Vec2> m_points;
  std::vector<double> m_weights;
  std::vector<int> m_region_of_node;
};

using LayoutPtr = std::shared_ptr<const QuadratureLayout>;

/// Scalar field tabulated on a layout.
struct ScalarField {
  LayoutPtr layout;
  Eigen::VectorXd values;  ///< one value per node
};

/// 2D vector field tabulated on a layout; components interleaved
/// (values[2q], values[2q+1]).
struct VectorField {
  LayoutPtr layout;
  Eigen::VectorXd values;

  Vec2 at(int q) const { return Vec2(values[2 * q], values[2 * q + 1]); }
};

double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& f, double p);

/// L^p distance between a tabulated field and an analytic comparand evaluated
/// at the field's nodes.
double lp_distance(const ScalarField& f, const std::function<double(const Vec2&)>& g, double p);
double lp_distance(const VectorField& f, const std::function<Vec2(const Vec2&)>& g, double p);
double lp_distance(const ScalarField& f, const ScalarField& g, double p);

/// Integral of an analytic function over the layout.
double integrate(const QuadratureLayout& layout, const std::function<double(const Vec2&)>& f);

}  // namespace gslab

#endif
