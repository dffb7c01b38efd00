#ifndef GSLAB_SCHEMES_HPP
#define GSLAB_SCHEMES_HPP

#include <memory>
#include <optional>

#include "gslab/gd.hpp"
#include "gslab/transforms.hpp"

namespace gslab {

enum class SchemeKind {
  P1,
  P2,
  P1Lumped,
  NcP1,
  NcP1Lumped,
  MpfaO,
  Hmm,
  Sushi,
  Nmfd,
  Vag2d,
};

/// Choice of the per-cell stabilisation isomorphism for the stabilised
/// schemes. Identity gives comparability factor exactly 1; FaceScaled scales
/// the residual entries by `factor` before projecting back onto the residual
/// image (spans the wider family of hybrid schemes).
struct Stabilisation {
  enum Kind { Identity, Scaled } kind = Identity;
  double factor = 1.0;
};

/// Vertex quadrature weights for the nodal scheme. Cell weights must sum to
/// |K| per cell; face weights must sum to |sigma| and reproduce the face
/// midpoint. Defaults: |K|/Card(V_K) and |sigma|/2.
struct NmfdWeights {
  std::vector<std::vector<double>> cell;       ///< [cell][local vertex]
  std::vector<std::array<double, 2>> face;     ///< [face][local vertex]
};

struct SchemeSpec {
  SchemeKind kind = SchemeKind::P1;
  Stabilisation stabilisation;                 ///< hmm / sushi / nmfd
  std::optional<NmfdWeights> nmfd_weights;
};

/// Flux-related data of the multi-point scheme: one record per
/// (cell, face, vertex) incidence.
struct MpfaData {
  struct SubfaceFlux {
    int cell = -1, face = -1, vertex = -1;
    int sv_dof = -1;          ///< the (face, vertex) dof
    double sub_length = 0;    ///< |sigma_v|
    Vec2 normal = Vec2::Zero();
    int subcell = -1;         ///< index into `subcells`
  };
  struct Subcell {
    int cell = -1, vertex = -1;
    double measure = 0;
    std::vector<int> flux_ids;  ///< rows of `fluxes` read by this subcell
    int cell_dof = -1;
    int region = -1;            ///< grad-layout region covering the subcell
  };
  std::vector<SubfaceFlux> fluxes;
  std::vector<Subcell> subcells;
  std::vector<int> cell_dof;  ///< per mesh cell
};

using TensorFn = std::function<Mat2(const Vec2&)>;
using ScalarFn = std::function<double(const Vec2&)>;

struct SchemeBuild {
  GradientDiscretisation gd;
  /// Pre-lumping reconstruction on the same layout (lumped kinds only);
  /// feeds the reconstruction-operator comparison.
  std::optional<GradientDiscretisation> companion;
  std::shared_ptr<const MpfaData> mpfa;
};

SchemeBuild build_p1(const MeshPtr& mesh, int degree, bool lumped);
SchemeBuild build_ncp1(const MeshPtr& mesh, bool lumped);
SchemeBuild build_mpfa_o(const MeshPtr& mesh);
SchemeBuild build_hmm(const MeshPtr& mesh, const Stabilisation& stab = {});
SchemeBuild build_sushi(const MeshPtr& mesh, const Stabilisation& stab = {});
SchemeBuild build_nmfd(const MeshPtr& mesh, const std::optional<NmfdWeights>& weights = {});
SchemeBuild build_vag2d(const MeshPtr& mesh);

SchemeBuild build_scheme(const SchemeSpec& spec, const MeshPtr& mesh);

/// Half-face fluxes sub_length * n . (A grad u) at a dof vector, one per
/// MpfaData::fluxes record, with A averaged per subcell by the scheme's own
/// quadrature (exact for cellwise-constant tensors).
Eigen::VectorXd mpfa_fluxes(const SchemeBuild& build, const DofVector& u, const TensorFn& A);

/// Cell-only system obtained by expressing the (face, vertex) unknowns
/// through local flux-conservativity solves around each vertex.
struct MpfaEliminated {
  SpMat cell_matrix;        ///< n_cells x n_cells
  Eigen::VectorXd rhs;      ///< per-cell source integrals
  SpMat recovery;           ///< (face,vertex)-dof values from cell values
};
MpfaEliminated mpfa_eliminate(const SchemeBuild& build, const TensorFn& A, const ScalarFn& f);

/// Full dof vector from the cell solution of the eliminated system.
DofVector mpfa_expand(const SchemeBuild& build, const MpfaEliminated& sys,
                      const Eigen::VectorXd& cell_values);

/// Stencil rule used by the condensed hybrid scheme: each interior face is
/// eliminated toward nearby cell centres (plus boundary faces if needed),
/// with minimal-norm weights reproducing the face midpoint.
CondensationRule sushi_rule(const GradientDiscretisation& hmm_gd, const PolytopalMesh& mesh);

// registry ------------------------------------------------------------------
SchemeKind scheme_kind_from_string(const std::string& name);
std::string to_string(SchemeKind kind);
std::vector<SchemeKind> all_scheme_kinds();
std::string describe_scheme(SchemeKind kind);

/// Mesh-kind predicates used by the builders' precondition checks.
bool is_simplicial(const PolytopalMesh& mesh);
bool is_axis_aligned_cartesian(const PolytopalMesh& mesh);

}  // namespace gslab

#endif
