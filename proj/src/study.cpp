#include "gslab/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gslab {

MeshPtr MeshFamily::build(int level) const {
  const int nx = base_nx << level;
  const int ny = base_ny << level;
  MeshPtr mesh = (kind == Cartesian) ? build_cartesian(nx, ny, lo, hi)
                                     : build_simplicial(nx, ny, lo, hi);
  if (perturb_amplitude > 0) mesh = perturb(*mesh, perturb_amplitude, seed + level);
  return mesh;
}

std::vector<StudyRow> convergence_study(const SchemeSpec& spec, const MeshFamily& family,
                                        const DiffusionProblem& problem, int levels,
                                        const StudyOptions& opts) {
  if (levels < 1) throw Error("convergence_study: need at least one level");
  if (!problem.manufactured())
    throw Error("convergence_study: problem has no manufactured solution");

  std::vector<StudyRow> rows;
  for (int level = 0; level < levels; ++level) {
    const auto t0 = std::chrono::steady_clock::now();
    MeshPtr mesh = family.build(level);
    SchemeBuild build = build_scheme(spec, mesh);
    const GradientDiscretisation& gd = build.gd;

    DofVector u;
    if (problem.semilinear())
      u = solve_semilinear(gd, problem, SemilinearForm::FunctionOfValues, nullptr, opts.solve);
    else
      u = solve_linear(gd, problem, opts.solve);

    StudyRow row;
    row.level = level;
    row.h = mesh->h_max();
    row.dofs = gd.n_interior();
    const ErrorReport err = error_report(gd, u, problem, /*with_rhs=*/false);
    row.err_l2 = err.err_l2;
    row.err_h1 = err.err_h1;
    if (!rows.empty()) {
      row.order_l2 = std::log2(rows.back().err_l2 / row.err_l2);
      row.order_h1 = std::log2(rows.back().err_h1 / row.err_h1);
    }
    if (opts.with_metrics) {
      row.coercivity = coercivity_constant(gd, opts.eig);
      const auto& problem_ref = problem;
      auto div_flux = [&problem_ref](const Vec2& x) {
        double d = -problem_ref.source(x);
        if (problem_ref.semilinear()) d += problem_ref.beta(problem_ref.exact(x));
        return d;
      };
      row.conformity_defect =
          limit_conformity_defect(gd, problem.exact_flux, div_flux, opts.eig);
      const ConsistencyDefect sd =
          consistency_defect(gd, problem.exact, problem.exact_grad, 2.0);
      row.consistency_lower = sd.lower;
      row.consistency_upper = std::min(sd.upper, sd.interpolant_bound);
    }
    if (opts.timings) {
      const auto t1 = std::chrono::steady_clock::now();
      row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    rows.push_back(row);
  }
  return rows;
}

std::string study_csv(const std::vector<StudyRow>& rows) {
  std::ostringstream os;
  os << "level,h,dofs,errL2,errH1,orderL2,orderH1,C_D,W_D,S_D_lo,S_D_hi,wall_ms\n";
  char buf[320];
  for (const StudyRow& r : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%d,%.12e,%d,%.12e,%.12e,%.6f,%.6f,%.12e,%.12e,%.12e,%.12e,%.3f\n", r.level,
                  r.h, r.dofs, r.err_l2, r.err_h1, r.order_l2, r.order_h1, r.coercivity,
                  r.conformity_defect, r.consistency_lower, r.consistency_upper, r.wall_ms);
    os << buf;
  }
  return os.str();
}

}  // namespace gslab
