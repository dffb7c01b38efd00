#ifndef GSLAB_TRANSFORMS_HPP
#define GSLAB_TRANSFORMS_HPP

#include <map>
#include <string>
#include <vector>

#include "gslab/gd.hpp"
#include "gslab/pencil.hpp"

namespace gslab {

/// Elimination of dofs by affine combinations that reproduce the eliminated
/// approximation points. `kept` lists retained dof ids of the parent; every
/// other dof needs a stencil into `kept` whose weights sum to one and whose
/// weighted points reproduce the eliminated point.
struct CondensationRule {
  std::vector<int> kept;
  struct Stencil {
    std::vector<int> dofs;
    std::vector<double> weights;
  };
  std::map<int, Stencil> eliminated;

  std::string to_json() const;
  static CondensationRule from_json(const std::string& text);
};

struct CondensedGd {
  GradientDiscretisation gd;
  double regularity = 0;            ///< 1 + worst stencil weight/offset factor
  SpMat extension;                  ///< parent dofs x kept dofs
  std::vector<int> kept;            ///< parent ids, in new dof order
};

/// Applies a condensation rule to a locally linearly exact discretisation.
/// The result reconstructs through the extended vector, keeps the parent's
/// quadrature layouts, and carries a condensed LLE structure.
CondensedGd barycentric_condense(const GradientDiscretisation& gd, const CondensationRule& rule);

/// Dof-indexed partition for mass lumping: for each dof, the regions of the
/// reconstruction layout making up its lump. Regions may be left unassigned
/// (empty lumps are allowed); assigning one region twice is an error.
struct LumpingPartition {
  std::vector<std::vector<int>> regions_of_dof;
};

/// Replaces the reconstruction by the piecewise-constant one on the given
/// partition. Same dof space, same gradient; the result carries the
/// piecewise-constant region map.
GradientDiscretisation mass_lump(const GradientDiscretisation& gd,
                                 const LumpingPartition& partition);

/// Largest ratio ||Pi u - Pi* u|| / ||grad u|| over the common dof space:
/// exact at p = 2 through the pencil of the difference Gram matrix against
/// the gradient Gram matrix. Requires the two discretisations to share their
/// layouts and gradient map.
double reconstruction_distance(const GradientDiscretisation& gd,
                               const GradientDiscretisation& gd_star,
                               const PencilOptions& opts = {});

/// Monte-Carlo lower bound on the same ratio for p != 2.
double reconstruction_distance_lower_bound(const GradientDiscretisation& gd,
                                           const GradientDiscretisation& gd_star, double p,
                                           int n_samples = 10000,
                                           std::uint64_t seed = 0x10e5eedULL);

}  // namespace gslab

#endif
