#include "gslab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <limits>

#include <json.hpp>

namespace gslab {

namespace {

// Chains the faces of one cell into a CCW vertex cycle. Fails loudly when the
// cell boundary is not a single closed loop.
std::vector<int> chain_cell_boundary(int k, const std::vector<int>& face_ids,
                                     const std::vector<std::array<int, 2>>& face_vertices) {
  std::map<int, std::vector<int>> at_vertex;  // vertex -> local face indices
  for (std::size_t l = 0; l < face_ids.size(); ++l) {
    const auto& fv = face_vertices[face_ids[l]];
    at_vertex[fv[0]].push_back(int(l));
    at_vertex[fv[1]].push_back(int(l));
  }
  for (const auto& [v, fs] : at_vertex) {
    if (fs.size() != 2)
      throw Error("cell " + std::to_string(k) + ": vertex " + std::to_string(v) +
                  " belongs to " + std::to_string(fs.size()) + " of its faces (expected 2)");
  }
  std::vector<int> cycle;
  std::vector<bool> used(face_ids.size(), false);
  int v0 = at_vertex.begin()->first;
  int v = v0;
  for (std::size_t step = 0; step < face_ids.size(); ++step) {
    cycle.push_back(v);
    bool advanced = false;
    for (int l : at_vertex[v]) {
      if (used[l]) continue;
      used[l] = true;
      const auto& fv = face_vertices[face_ids[l]];
      v = (fv[0] == v) ? fv[1] : fv[0];
      advanced = true;
      break;
    }
    if (!advanced) throw Error("cell " + std::to_string(k) + ": boundary is not a single cycle");
  }
  if (v != v0) throw Error("cell " + std::to_string(k) + ": boundary does not close");
  return cycle;
}

}  // namespace

PolytopalMesh::PolytopalMesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cell_faces,
                             std::vector<std::array<int, 2>> face_vertices,
                             const std::vector<std::optional<Vec2>>& centers)
    : m_vertices(std::move(vertices)) {
  const int nc = int(cell_faces.size());
  const int nf = int(face_vertices.size());
  m_faces.resize(nf);
  for (int s = 0; s < nf; ++s) {
    const auto& fv = face_vertices[s];
    if (fv[0] < 0 || fv[1] < 0 || fv[0] >= int(m_vertices.size()) ||
        fv[1] >= int(m_vertices.size()) || fv[0] == fv[1])
      throw Error("face " + std::to_string(s) + ": invalid vertex pair");
    Face& f = m_faces[s];
    f.v = fv;
    const Vec2 a = m_vertices[fv[0]], b = m_vertices[fv[1]];
    f.measure = (b - a).norm();
    if (f.measure <= 0) throw Error("face " + std::to_string(s) + ": zero length");
    f.center = 0.5 * (a + b);
  }

  // face -> cells adjacency
  for (int k = 0; k < nc; ++k) {
    for (int s : cell_faces[k]) {
      if (s < 0 || s >= nf) throw Error("cell " + std::to_string(k) + ": invalid face id");
      Face& f = m_faces[s];
      if (f.cells[0] < 0)
        f.cells[0] = k;
      else if (f.cells[1] < 0)
        f.cells[1] = k;
      else
        throw Error("face " + std::to_string(s) + ": adjacent to more than two cells");
    }
  }
  for (int s = 0; s < nf; ++s)
    if (m_faces[s].cells[0] < 0) throw Error("face " + std::to_string(s) + ": not used by any cell");

  m_cells.resize(nc);
  for (int k = 0; k < nc; ++k) {
    Cell& c = m_cells[k];
    c.faces = cell_faces[k];
    if (c.faces.size() < 3) throw Error("cell " + std::to_string(k) + ": fewer than 3 faces");
    c.vertices = chain_cell_boundary(k, c.faces, face_vertices);

    // signed area; reverse to make the cycle CCW
    double twice_area = 0;
    const auto& vs = c.vertices;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const Vec2& p = m_vertices[vs[i]];
      const Vec2& q = m_vertices[vs[(i + 1) % vs.size()]];
      twice_area += p.x() * q.y() - q.x() * p.y();
    }
    if (twice_area < 0) {
      std::reverse(c.vertices.begin(), c.vertices.end());
      twice_area = -twice_area;
    }
    c.measure = 0.5 * twice_area;
    if (c.measure <= 0) throw Error("cell " + std::to_string(k) + ": nonpositive area");

    // centroid
    Vec2 centroid = Vec2::Zero();
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const Vec2& p = m_vertices[c.vertices[i]];
      const Vec2& q = m_vertices[c.vertices[(i + 1) % vs.size()]];
      const double cross = p.x() * q.y() - q.x() * p.y();
      centroid += cross * (p + q);
    }
    centroid /= 6.0 * c.measure;
    c.center = (k < int(centers.size()) && centers[k]) ? *centers[k] : centroid;

    c.diameter = 0;
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j)
        c.diameter = std::max(c.diameter, (m_vertices[vs[i]] - m_vertices[vs[j]]).norm());

    // outward normals and centre distances, walking the CCW cycle
    for (std::size_t i = 0; i < c.vertices.size(); ++i) {
      const int va = c.vertices[i];
      const int vb = c.vertices[(i + 1) % c.vertices.size()];
      int face_id = -1;
      for (int s : c.faces) {
        const auto& fv = m_faces[s].v;
        if ((fv[0] == va && fv[1] == vb) || (fv[0] == vb && fv[1] == va)) {
          face_id = s;
          break;
        }
      }
      if (face_id < 0) throw Error("cell " + std::to_string(k) + ": inconsistent face cycle");
      Face& f = m_faces[face_id];
      const int side = f.side_of(k);
      const Vec2 t = (m_vertices[vb] - m_vertices[va]).normalized();
      f.normal[side] = rot_cw(t);
      f.dist[side] = (f.center - c.center).dot(f.normal[side]);
    }
  }

  m_boundary_vertex.assign(m_vertices.size(), false);
  for (const Face& f : m_faces)
    if (f.boundary()) {
      m_boundary_vertex[f.v[0]] = true;
      m_boundary_vertex[f.v[1]] = true;
    }

  m_vertex_faces.assign(m_vertices.size(), {});
  for (int s = 0; s < nf; ++s) {
    m_vertex_faces[m_faces[s].v[0]].push_back(s);
    m_vertex_faces[m_faces[s].v[1]].push_back(s);
  }

  // |Omega| recovered from the boundary by the divergence theorem; validate()
  // compares it with the sum of cell areas.
  m_domain_measure = 0;
  for (const Face& f : m_faces)
    if (f.boundary()) m_domain_measure += 0.5 * f.measure * f.center.dot(f.normal[0]);
}

double PolytopalMesh::h_max() const {
  double h = 0;
  for (const Cell& c : m_cells) h = std::max(h, c.diameter);
  return h;
}

MeshPtr build_cartesian(int nx, int ny, const Vec2& lo, const Vec2& hi) {
  if (nx < 1 || ny < 1) throw Error("build_cartesian: cell counts must be >= 1");
  if (hi.x() <= lo.x() || hi.y() <= lo.y()) throw Error("build_cartesian: degenerate domain");
  const double dx = (hi.x() - lo.x()) / nx;
  const double dy = (hi.y() - lo.y()) / ny;

  std::vector<Vec2> vertices;
  vertices.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) vertices.emplace_back(lo.x() + i * dx, lo.y() + j * dy);
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

  std::vector<std::array<int, 2>> face_vertices;
  // horizontal faces: hfid(i,j) between (i,j) and (i+1,j), j = 0..ny
  auto hfid = [nx](int i, int j) { return j * nx + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) face_vertices.push_back({vid(i, j), vid(i + 1, j)});
  const int n_h = nx * (ny + 1);
  // vertical faces: vfid(i,j) between (i,j) and (i,j+1), i = 0..nx
  auto vfid = [&](int i, int j) { return n_h + i * ny + j; };
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j < ny; ++j) face_vertices.push_back({vid(i, j), vid(i, j + 1)});

  std::vector<std::vector<int>> cell_faces;
  cell_faces.reserve(nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      cell_faces.push_back({hfid(i, j), vfid(i + 1, j), hfid(i, j + 1), vfid(i, j)});

  return std::make_shared<PolytopalMesh>(std::move(vertices), std::move(cell_faces),
                                         std::move(face_vertices));
}

MeshPtr build_simplicial(int nx, int ny, const Vec2& lo, const Vec2& hi) {
  if (nx < 1 || ny < 1) throw Error("build_simplicial: cell counts must be >= 1");
  if (hi.x() <= lo.x() || hi.y() <= lo.y()) throw Error("build_simplicial: degenerate domain");
  const double dx = (hi.x() - lo.x()) / nx;
  const double dy = (hi.y() - lo.y()) / ny;

  std::vector<Vec2> vertices;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) vertices.emplace_back(lo.x() + i * dx, lo.y() + j * dy);
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

  // faces: horizontals, verticals, diagonals (from (i,j) to (i+1,j+1))
  std::vector<std::array<int, 2>> face_vertices;
  auto hfid = [nx](int i, int j) { return j * nx + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) face_vertices.push_back({vid(i, j), vid(i + 1, j)});
  const int n_h = nx * (ny + 1);
  auto vfid = [&](int i, int j) { return n_h + i * ny + j; };
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j < ny; ++j) face_vertices.push_back({vid(i, j), vid(i, j + 1)});
  const int n_hv = n_h + (nx + 1) * ny;
  auto dfid = [&](int i, int j) { return n_hv + j * nx + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) face_vertices.push_back({vid(i, j), vid(i + 1, j + 1)});

  std::vector<std::vector<int>> cell_faces;
  cell_faces.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      // lower-right triangle (i,j)-(i+1,j)-(i+1,j+1)
      cell_faces.push_back({hfid(i, j), vfid(i + 1, j), dfid(i, j)});
      // upper-left triangle (i,j)-(i+1,j+1)-(i,j+1)
      cell_faces.push_back({dfid(i, j), hfid(i, j + 1), vfid(i, j)});
    }

  return std::make_shared<PolytopalMesh>(std::move(vertices), std::move(cell_faces),
                                         std::move(face_vertices));
}

MeshPtr perturb(const PolytopalMesh& mesh, double amplitude, std::uint64_t seed) {
  if (amplitude < 0 || amplitude > 0.3)
    throw Error("perturb: amplitude must lie in [0, 0.3]");

  std::vector<Vec2> vertices = mesh.vertices();
  if (amplitude > 0) {
    Rng rng(seed);
    for (int i = 0; i < mesh.n_vertices(); ++i) {
      // draw for every vertex so the result does not depend on which
      // vertices happen to be interior
      const double ux = rng.next_symmetric();
      const double uy = rng.next_symmetric();
      if (mesh.vertex_on_boundary(i)) continue;
      double h_loc = std::numeric_limits<double>::infinity();
      for (int s : mesh.vertex_faces()[i]) h_loc = std::min(h_loc, mesh.face(s).measure);
      vertices[i] += amplitude * h_loc * Vec2(ux, uy);
    }
  }

  std::vector<std::vector<int>> cell_faces(mesh.n_cells());
  for (int k = 0; k < mesh.n_cells(); ++k) cell_faces[k] = mesh.cell(k).faces;
  std::vector<std::array<int, 2>> face_vertices(mesh.n_faces());
  for (int s = 0; s < mesh.n_faces(); ++s) face_vertices[s] = mesh.face(s).v;

  auto out = std::make_shared<PolytopalMesh>(std::move(vertices), std::move(cell_faces),
                                             std::move(face_vertices));
  for (int k = 0; k < out->n_cells(); ++k)
    for (int s : out->cell(k).faces) {
      const Face& f = out->face(s);
      if (f.dist[f.side_of(k)] <= 0)
        throw Error("perturb: cell " + std::to_string(k) + ", face " + std::to_string(s) +
                    ": centre-to-face distance became nonpositive");
    }
  return out;
}

std::vector<MeshViolation> validate(const PolytopalMesh& mesh) {
  std::vector<MeshViolation> out;
  double cell_sum = 0;
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const Cell& c = mesh.cell(k);
    cell_sum += c.measure;
    const double tol = 1e-12 * std::max(1.0, c.measure);
    Vec2 stokes = Vec2::Zero();
    double diamond_sum = 0;
    for (int s : c.faces) {
      const Face& f = mesh.face(s);
      const int side = f.side_of(k);
      if (f.dist[side] <= 0)
        out.push_back({"centre-to-face distance d <= 0", k, s});
      if (std::abs(f.normal[side].norm() - 1.0) > 1e-12)
        out.push_back({"normal is not unit", k, s});
      if (std::abs((f.center - c.center).dot(f.normal[side]) - f.dist[side]) > tol)
        out.push_back({"(center_sigma - center_K).n != d", k, s});
      stokes += f.measure * f.normal[side];
      diamond_sum += mesh.half_diamond(s, side);
    }
    if (stokes.norm() > tol)
      out.push_back({"sum |sigma| n_{K,sigma} != 0 in cell " + std::to_string(k), k, -1});
    if (std::abs(diamond_sum - c.measure) > tol)
      out.push_back({"half-diamond areas do not fill the cell", k, -1});
  }
  for (int s = 0; s < mesh.n_faces(); ++s) {
    const Face& f = mesh.face(s);
    if (!f.boundary() && (f.normal[0] + f.normal[1]).norm() > 1e-12)
      out.push_back({"opposite normals disagree across interior face", -1, s});
  }
  if (std::abs(cell_sum - mesh.domain_measure()) > 1e-12 * std::max(1.0, cell_sum))
    out.push_back({"sum of cell areas differs from the domain area", -1, -1});
  return out;
}

MeshStats mesh_stats(const PolytopalMesh& mesh) {
  MeshStats st;
  st.n_cells = mesh.n_cells();
  st.n_faces = mesh.n_faces();
  st.n_vertices = mesh.n_vertices();
  double flat = 0;
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const Cell& c = mesh.cell(k);
    st.h_max = std::max(st.h_max, c.diameter);
    for (int s : c.faces) {
      const Face& f = mesh.face(s);
      const int side = f.side_of(k);
      flat = std::max(flat, c.diameter / f.dist[side] + c.measure / mesh.half_diamond(s, side));
    }
  }
  double ratio = 0;  // interior faces only
  for (const Face& f : mesh.faces())
    if (!f.boundary()) ratio = std::max({ratio, f.dist[0] / f.dist[1], f.dist[1] / f.dist[0]});
  st.regularity = flat + ratio;
  return st;
}

// ------------------------------------------------------------------ I/O ----

std::string mesh_to_json(const PolytopalMesh& mesh) {
  std::ostringstream os;
  auto num = [&](double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  os << "{\n  \"dim\": 2,\n  \"vertices\": [";
  for (int i = 0; i < mesh.n_vertices(); ++i) {
    os << (i ? ", " : "") << "[" << num(mesh.vertex(i).x()) << ", " << num(mesh.vertex(i).y())
       << "]";
  }
  os << "],\n  \"faces\": [\n";
  for (int s = 0; s < mesh.n_faces(); ++s) {
    const Face& f = mesh.face(s);
    os << "    {\"v\": [" << f.v[0] << ", " << f.v[1] << "], \"cells\": [" << f.cells[0];
    if (!f.boundary()) os << ", " << f.cells[1];
    os << "]}" << (s + 1 < mesh.n_faces() ? ",\n" : "\n");
  }
  os << "  ],\n  \"cells\": [\n";
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const Cell& c = mesh.cell(k);
    os << "    {\"faces\": [";
    for (std::size_t l = 0; l < c.faces.size(); ++l) os << (l ? ", " : "") << c.faces[l];
    os << "], \"center\": [" << num(c.center.x()) << ", " << num(c.center.y()) << "]}"
       << (k + 1 < mesh.n_cells() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
  return os.str();
}

void write_mesh(const PolytopalMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("write_mesh: cannot open " + path);
  out << mesh_to_json(mesh);
}

MeshPtr read_mesh_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw Error(std::string("mesh file: JSON parse error: ") + e.what());
  }
  if (!j.contains("dim") || j["dim"] != 2) throw Error("mesh file: \"dim\" must be 2");
  if (!j.contains("vertices") || !j.contains("faces") || !j.contains("cells"))
    throw Error("mesh file: missing vertices/faces/cells");

  std::vector<Vec2> vertices;
  for (const auto& v : j["vertices"]) {
    if (!v.is_array() || v.size() != 2)
      throw Error("mesh file: vertex " + std::to_string(vertices.size()) + " is not a pair");
    vertices.emplace_back(v[0].get<double>(), v[1].get<double>());
  }
  std::vector<std::array<int, 2>> face_vertices;
  std::vector<std::vector<int>> face_cells;
  for (const auto& f : j["faces"]) {
    if (!f.contains("v") || f["v"].size() != 2)
      throw Error("mesh file: face " + std::to_string(face_vertices.size()) +
                  " needs exactly two vertices");
    face_vertices.push_back({f["v"][0].get<int>(), f["v"][1].get<int>()});
    std::vector<int> cells;
    if (f.contains("cells")) cells = f["cells"].get<std::vector<int>>();
    if (cells.size() < 1 || cells.size() > 2)
      throw Error("mesh file: face " + std::to_string(face_vertices.size() - 1) +
                  " lists " + std::to_string(cells.size()) + " cells (expected 1 or 2)");
    face_cells.push_back(cells);
  }
  std::vector<std::vector<int>> cell_faces;
  std::vector<std::optional<Vec2>> centers;
  for (const auto& c : j["cells"]) {
    if (!c.contains("faces")) throw Error("mesh file: cell without \"faces\"");
    cell_faces.push_back(c["faces"].get<std::vector<int>>());
    if (c.contains("center"))
      centers.emplace_back(Vec2(c["center"][0].get<double>(), c["center"][1].get<double>()));
    else
      centers.emplace_back(std::nullopt);
  }

  auto mesh = std::make_shared<PolytopalMesh>(std::move(vertices), std::move(cell_faces),
                                              std::move(face_vertices), centers);
  // cross-check the face->cells lists declared in the file against the
  // adjacency recomputed from the cell->faces lists
  for (int s = 0; s < mesh->n_faces(); ++s) {
    std::vector<int> declared = face_cells[s];
    std::vector<int> actual{mesh->face(s).cells[0]};
    if (!mesh->face(s).boundary()) actual.push_back(mesh->face(s).cells[1]);
    std::sort(declared.begin(), declared.end());
    std::sort(actual.begin(), actual.end());
    if (declared != actual)
      throw Error("mesh file: face " + std::to_string(s) +
                  ": declared cell adjacency disagrees with the cell face lists");
  }
  auto violations = validate(*mesh);
  if (!violations.empty())
    throw Error("mesh file: invalid geometry: " + violations.front().what);
  return mesh;
}

MeshPtr read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_mesh: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return read_mesh_json(ss.str());
}

}  // namespace gslab
