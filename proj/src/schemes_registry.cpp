#include <sstream>

#include "gslab/schemes.hpp"

namespace gslab {

SchemeKind scheme_kind_from_string(const std::string& name) {
  if (name == "p1") return SchemeKind::P1;
  if (name == "p2") return SchemeKind::P2;
  if (name == "p1_lumped") return SchemeKind::P1Lumped;
  if (name == "ncp1") return SchemeKind::NcP1;
  if (name == "ncp1_lumped") return SchemeKind::NcP1Lumped;
  if (name == "mpfa_o") return SchemeKind::MpfaO;
  if (name == "hmm") return SchemeKind::Hmm;
  if (name == "sushi") return SchemeKind::Sushi;
  if (name == "nmfd") return SchemeKind::Nmfd;
  if (name == "vag2d") return SchemeKind::Vag2d;
  throw Error("unknown scheme: " + name);
}

std::string to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::P1: return "p1";
    case SchemeKind::P2: return "p2";
    case SchemeKind::P1Lumped: return "p1_lumped";
    case SchemeKind::NcP1: return "ncp1";
    case SchemeKind::NcP1Lumped: return "ncp1_lumped";
    case SchemeKind::MpfaO: return "mpfa_o";
    case SchemeKind::Hmm: return "hmm";
    case SchemeKind::Sushi: return "sushi";
    case SchemeKind::Nmfd: return "nmfd";
    case SchemeKind::Vag2d: return "vag2d";
  }
  throw Error("unknown scheme kind");
}

std::vector<SchemeKind> all_scheme_kinds() {
  return {SchemeKind::P1,   SchemeKind::P2,     SchemeKind::P1Lumped, SchemeKind::NcP1,
          SchemeKind::NcP1Lumped, SchemeKind::MpfaO, SchemeKind::Hmm,  SchemeKind::Sushi,
          SchemeKind::Nmfd, SchemeKind::Vag2d};
}

std::string describe_scheme(SchemeKind kind) {
  std::ostringstream os;
  switch (kind) {
    case SchemeKind::P1:
      os << "p1: conforming piecewise-linear finite elements.\n"
         << "  dofs: mesh vertices. mesh: simplicial only.\n"
         << "  piecewise-constant reconstruction: no. conforming (zero Stokes residual).";
      break;
    case SchemeKind::P2:
      os << "p2: conforming piecewise-quadratic finite elements.\n"
         << "  dofs: vertices + face midpoints. mesh: simplicial only.\n"
         << "  piecewise-constant reconstruction: no. conforming (zero Stokes residual).";
      break;
    case SchemeKind::P1Lumped:
      os << "p1_lumped: p1 with the reconstruction lumped onto the barycentric\n"
         << "  dual cells around the vertices. dofs: vertices. mesh: simplicial only.\n"
         << "  piecewise-constant reconstruction: yes. gradient identical to p1.";
      break;
    case SchemeKind::NcP1:
      os << "ncp1: nonconforming piecewise-linear elements, continuous at face\n"
         << "  midpoints. dofs: faces. mesh: simplicial only.\n"
         << "  piecewise-constant reconstruction: no.";
      break;
    case SchemeKind::NcP1Lumped:
      os << "ncp1_lumped: ncp1 with the reconstruction lumped onto the diamonds\n"
         << "  around the faces. dofs: faces. mesh: simplicial only.\n"
         << "  piecewise-constant reconstruction: yes. gradient identical to ncp1.";
      break;
    case SchemeKind::MpfaO:
      os << "mpfa_o: multi-point flux approximation, O-variant, as a gradient\n"
         << "  scheme. dofs: cells + (face, vertex) pairs.\n"
         << "  mesh: two admissible kinds only - axis-aligned Cartesian or simplicial.\n"
         << "  piecewise-constant reconstruction: yes. supports flux form and\n"
         << "  cell-only elimination of the (face, vertex) unknowns.";
      break;
    case SchemeKind::Hmm:
      os << "hmm: hybrid mimetic mixed family (hybrid finite volumes / mixed\n"
         << "  finite differences). dofs: cells + faces. mesh: any polytopal.\n"
         << "  piecewise-constant reconstruction: yes.\n"
         << "  stabilisation: identity by default (comparability factor 1);\n"
         << "  scaled variant available.";
      break;
    case SchemeKind::Sushi:
      os << "sushi: hmm with every interior face unknown eliminated by\n"
         << "  barycentric combinations of nearby cell centres.\n"
         << "  dofs after condensation: cells (+ boundary faces). mesh: any polytopal.\n"
         << "  piecewise-constant reconstruction: yes.";
      break;
    case SchemeKind::Nmfd:
      os << "nmfd: nodal mimetic finite differences. dofs: vertices.\n"
         << "  mesh: any polytopal. vertex weights configurable; defaults\n"
         << "  |K|/Card(V_K) and |sigma|/2 (midpoint-exact).\n"
         << "  piecewise-constant reconstruction: no (cell values are weighted\n"
         << "  vertex averages). stabilisation: identity (comparability factor 1).";
      break;
    case SchemeKind::Vag2d:
      os << "vag2d: vertex-average gradient scheme (2D form). affine\n"
         << "  reconstruction on the centre-face subtriangulation, mass-lumped\n"
         << "  onto centre/vertex regions. dofs: cell centres + vertices.\n"
         << "  mesh: any polytopal. piecewise-constant reconstruction: yes.";
      break;
  }
  return os.str();
}

SchemeBuild build_scheme(const SchemeSpec& spec, const MeshPtr& mesh) {
  switch (spec.kind) {
    case SchemeKind::P1: return build_p1(mesh, 1, false);
    case SchemeKind::P2: return build_p1(mesh, 2, false);
    case SchemeKind::P1Lumped: return build_p1(mesh, 1, true);
    case SchemeKind::NcP1: return build_ncp1(mesh, false);
    case SchemeKind::NcP1Lumped: return build_ncp1(mesh, true);
    case SchemeKind::MpfaO: return build_mpfa_o(mesh);
    case SchemeKind::Hmm: return build_hmm(mesh, spec.stabilisation);
    case SchemeKind::Sushi: return build_sushi(mesh, spec.stabilisation);
    case SchemeKind::Nmfd: return build_nmfd(mesh, spec.nmfd_weights);
    case SchemeKind::Vag2d: return build_vag2d(mesh);
  }
  throw Error("unknown scheme kind");
}

}  // namespace gslab
