#ifndef GSLAB_MESH_HPP
#define GSLAB_MESH_HPP

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gslab/common.hpp"

namespace gslab {

/// A straight face (edge, in 2D) of a polytopal mesh, with the geometric data
/// attached to each of its one or two adjacent cells.
struct Face {
  std::array<int, 2> v{-1, -1};      ///< endpoint vertex ids
  std::array<int, 2> cells{-1, -1};  ///< adjacent cells; cells[1] < 0 on the boundary
  double measure = 0;                ///< length
  Vec2 center = Vec2::Zero();        ///< midpoint
  std::array<Vec2, 2> normal{Vec2::Zero(), Vec2::Zero()};  ///< outward unit normal per side
  std::array<double, 2> dist{0, 0};  ///< orthogonal distance centre-to-face per side

  bool boundary() const { return cells[1] < 0; }
  int side_of(int cell) const { return cells[0] == cell ? 0 : 1; }
};

struct Cell {
  std::vector<int> faces;
  std::vector<int> vertices;  ///< CCW cycle around the cell
  Vec2 center = Vec2::Zero(); ///< x_K (centroid unless provided by a file)
  double measure = 0;         ///< |K|
  double diameter = 0;        ///< h_K
};

struct MeshStats {
  double h_max = 0;       ///< largest cell diameter
  double regularity = 0;  ///< flatness + neighbour-distance regularity factor
  int n_cells = 0;
  int n_faces = 0;
  int n_vertices = 0;
};

struct MeshViolation {
  std::string what;
  int cell = -1;
  int face = -1;
};

/// 2D polytopal mesh: cells with straight faces, a centre per cell with
/// respect to which the cell is strictly star-shaped, and all derived
/// geometric quantities. Immutable after construction; safe to share
/// read-only across threads.
class PolytopalMesh {
public:
  /// Builds the mesh from raw topology. Vertex coordinates, per-cell face id
  /// lists and per-face vertex pairs; optional per-cell centres (centroid
  /// when absent). All derived quantities (normals, measures, half-diamond
  /// areas) are recomputed here, never taken on trust.
  PolytopalMesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cell_faces,
                std::vector<std::array<int, 2>> face_vertices,
                const std::vector<std::optional<Vec2>>& centers = {});

  int n_cells() const { return int(m_cells.size()); }
  int n_faces() const { return int(m_faces.size()); }
  int n_vertices() const { return int(m_vertices.size()); }

  const Cell& cell(int k) const { return m_cells[k]; }
  const Face& face(int s) const { return m_faces[s]; }
  const Vec2& vertex(int i) const { return m_vertices[i]; }
  bool vertex_on_boundary(int i) const { return m_boundary_vertex[i]; }

  const std::vector<Cell>& cells() const { return m_cells; }
  const std::vector<Face>& faces() const { return m_faces; }
  const std::vector<Vec2>& vertices() const { return m_vertices; }

  /// Half-diamond area |D_{K,sigma}| = |sigma| d_{K,sigma} / 2.
  double half_diamond(int face_id, int side) const {
    const Face& f = m_faces[face_id];
    return 0.5 * f.measure * f.dist[side];
  }

  double domain_measure() const { return m_domain_measure; }
  double h_max() const;

  /// Faces incident to each vertex (built once, shared by scheme builders).
  const std::vector<std::vector<int>>& vertex_faces() const { return m_vertex_faces; }

  /// Test hook: validation operates on plain data, so checks can be probed
  /// on deliberately corrupted copies.
  Face& mutable_face_for_test(int s) { return m_faces[s]; }

private:
  std::vector<Vec2> m_vertices;
  std::vector<Cell> m_cells;
  std::vector<Face> m_faces;
  std::vector<bool> m_boundary_vertex;
  std::vector<std::vector<int>> m_vertex_faces;
  double m_domain_measure = 0;
};

using MeshPtr = std::shared_ptr<const PolytopalMesh>;

/// nx-by-ny grid of axis-aligned rectangular cells on the given rectangle.
MeshPtr build_cartesian(int nx, int ny, const Vec2& lo, const Vec2& hi);

/// Same grid with every rectangle split into two triangles, so that every
/// cell has exactly three faces.
MeshPtr build_simplicial(int nx, int ny, const Vec2& lo, const Vec2& hi);

/// Moves every interior vertex by a deterministic random offset bounded by
/// amplitude times the shortest incident edge. amplitude = 0 returns an
/// identical mesh. Throws if a cell would stop being star-shaped.
MeshPtr perturb(const PolytopalMesh& mesh, double amplitude, std::uint64_t seed);

/// Geometric validity checks. Empty result means all invariants hold within
/// tolerance 1e-12 * max(1, |K|) per cell.
std::vector<MeshViolation> validate(const PolytopalMesh& mesh);

/// h_max and the regularity factor: per (cell, face), flatness h_K/d_{K,sigma}
/// plus volume ratio |K|/|D_{K,sigma}|, maximised; plus the largest
/// centre-distance ratio across interior faces (interior faces only; a mesh
/// without interior faces contributes 0 there).
MeshStats mesh_stats(const PolytopalMesh& mesh);

MeshPtr read_mesh(const std::string& path);
MeshPtr read_mesh_json(const std::string& json_text);
void write_mesh(const PolytopalMesh& mesh, const std::string& path);
std::string mesh_to_json(const PolytopalMesh& mesh);

}  // namespace gslab

#endif
