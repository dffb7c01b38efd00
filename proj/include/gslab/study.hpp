#ifndef GSLAB_STUDY_HPP
#define GSLAB_STUDY_HPP

#include <optional>
#include <string>
#include <vector>

#include "gslab/schemes.hpp"
#include "gslab/solver.hpp"

namespace gslab {

/// Refinement family: base grid doubled per level, optionally perturbed
/// (deterministically, per level).
struct MeshFamily {
  enum Kind { Cartesian, Simplicial } kind = Cartesian;
  int base_nx = 4, base_ny = 4;
  Vec2 lo = Vec2(0, 0), hi = Vec2(1, 1);
  double perturb_amplitude = 0.0;
  std::uint64_t seed = 1;

  MeshPtr build(int level) const;
};

struct StudyRow {
  int level = 0;
  double h = 0;
  int dofs = 0;   ///< interior unknowns
  double err_l2 = 0, err_h1 = 0;
  double order_l2 = 0, order_h1 = 0;  ///< 0 on the first level
  double coercivity = 0;
  double conformity_defect = 0;       ///< Stokes defect of the exact flux
  double consistency_lower = 0, consistency_upper = 0;
  double wall_ms = 0;
};

struct StudyOptions {
  bool with_metrics = true;
  bool timings = false;  ///< leave wall_ms at zero for reproducible artifacts
  SolveOptions solve;
  PencilOptions eig;
};

std::vector<StudyRow> convergence_study(const SchemeSpec& spec, const MeshFamily& family,
                                        const DiffusionProblem& problem, int levels,
                                        const StudyOptions& opts = {});

/// Fixed CSV schema:
/// level,h,dofs,errL2,errH1,orderL2,orderH1,C_D,W_D,S_D_lo,S_D_hi,wall_ms
std::string study_csv(const std::vector<StudyRow>& rows);

}  // namespace gslab

#endif
