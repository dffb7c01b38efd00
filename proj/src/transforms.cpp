#include "gslab/transforms.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace gslab {

std::string CondensationRule::to_json() const {
  nlohmann::json j;
  j["kept"] = kept;
  nlohmann::json elims = nlohmann::json::array();
  for (const auto& [dof, st] : eliminated) {
    nlohmann::json e;
    e["dof"] = dof;
    e["stencil"] = st.dofs;
    e["weights"] = st.weights;
    elims.push_back(e);
  }
  j["eliminated"] = elims;
  return j.dump(2);
}

CondensationRule CondensationRule::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(std::string("condensation rule: JSON parse error: ") + e.what());
  }
  CondensationRule rule;
  rule.kept = j.at("kept").get<std::vector<int>>();
  for (const auto& e : j.at("eliminated")) {
    CondensationRule::Stencil st;
    st.dofs = e.at("stencil").get<std::vector<int>>();
    st.weights = e.at("weights").get<std::vector<double>>();
    rule.eliminated[e.at("dof").get<int>()] = st;
  }
  return rule;
}

CondensedGd barycentric_condense(const GradientDiscretisation& gd, const CondensationRule& rule) {
  if (!gd.lle) throw Error("barycentric_condense: parent lacks an LLE structure");
  const int n_parent = gd.n_dofs();

  std::vector<int> new_index(n_parent, -1);
  for (std::size_t j = 0; j < rule.kept.size(); ++j) {
    const int i = rule.kept[j];
    if (i < 0 || i >= n_parent) throw Error("barycentric_condense: kept dof out of range");
    new_index[i] = int(j);
  }
  const int n_new = int(rule.kept.size());

  // every parent dof is either kept or eliminated by a valid stencil
  std::vector<Triplet> ext;
  for (int i = 0; i < n_parent; ++i) {
    if (new_index[i] >= 0) {
      ext.emplace_back(i, new_index[i], 1.0);
      continue;
    }
    if (gd.is_boundary_dof(i))
      throw Error("barycentric_condense: boundary dof " + std::to_string(i) +
                  " cannot be eliminated");
    auto it = rule.eliminated.find(i);
    if (it == rule.eliminated.end())
      throw Error("barycentric_condense: dof " + std::to_string(i) +
                  " is neither kept nor given a stencil");
    const auto& st = it->second;
    if (st.dofs.empty()) throw Error("barycentric_condense: empty stencil for dof " +
                                     std::to_string(i));
    double wsum = 0;
    Vec2 psum = Vec2::Zero();
    for (std::size_t l = 0; l < st.dofs.size(); ++l) {
      const int j = st.dofs[l];
      if (j < 0 || j >= n_parent || new_index[j] < 0)
        throw Error("barycentric_condense: stencil of dof " + std::to_string(i) +
                    " uses a non-retained dof");
      wsum += st.weights[l];
      psum += st.weights[l] * gd.point(j);
      ext.emplace_back(i, new_index[j], st.weights[l]);
    }
    if (std::abs(wsum - 1.0) > 1e-12)
      throw Error("barycentric_condense: weights of dof " + std::to_string(i) +
                  " sum to " + std::to_string(wsum));
    if ((psum - gd.point(i)).norm() > 1e-12 * std::max(1.0, gd.point(i).norm()))
      throw Error("barycentric_condense: stencil of dof " + std::to_string(i) +
                  " does not reproduce its approximation point");
  }

  SpMat E(n_parent, n_new);
  E.setFromTriplets(ext.begin(), ext.end());

  std::vector<Vec2> points(n_new);
  std::vector<bool> boundary(n_new);
  for (int j = 0; j < n_new; ++j) {
    points[j] = gd.point(rule.kept[j]);
    boundary[j] = gd.is_boundary_dof(rule.kept[j]);
  }

  CondensedGd out{
      GradientDiscretisation(gd.name() + "+condensed", gd.mesh(), std::move(points),
                             std::move(boundary), gd.pi_layout(), gd.grad_layout(),
                             gd.reconstruction_map() * E, gd.gradient_map() * E),
      0.0, E, rule.kept};

  // regularity of the condensation: worst stencil weight mass plus worst
  // stencil-point offset relative to the regions the eliminated dof serves
  double reg = 0;
  for (const auto& [i, st] : rule.eliminated) {
    double wabs = 0;
    for (double w : st.weights) wabs += std::abs(w);
    double offset = 0;
    for (std::size_t r = 0; r < gd.lle->regions.size(); ++r) {
      const LleRegion& reg_r = gd.lle->regions[r];
      if (std::find(reg_r.dofs.begin(), reg_r.dofs.end(), i) == reg_r.dofs.end()) continue;
      for (int j : st.dofs)
        offset = std::max(offset, (gd.point(j) - gd.point(i)).norm() / reg_r.diam);
    }
    reg = std::max(reg, wabs + offset);
  }
  out.regularity = 1.0 + reg;
  out.gd.condensation_regularity = out.regularity;

  // condensed LLE structure
  LleStructure lle;
  lle.regions.reserve(gd.lle->regions.size());
  const auto& layout = *gd.grad_layout();
  // representative node per LLE region, to extract the condensed gradient
  // columns (gradients are constant per region for every condensed scheme)
  std::vector<int> probe_node(gd.lle->regions.size(), -1);
  for (int r = 0; r < layout.n_regions(); ++r) {
    const int lr = layout.regions()[r].lle_region;
    if (lr >= 0 && probe_node[lr] < 0) probe_node[lr] = layout.regions()[r].first_node;
  }
  const SpMat& Gnew = out.gd.gradient_map();
  Eigen::MatrixXd Gdense;  // filled lazily per region from sparse rows
  for (std::size_t r = 0; r < gd.lle->regions.size(); ++r) {
    const LleRegion& parent = gd.lle->regions[r];
    LleRegion reg_new;
    reg_new.diam = parent.diam;
    // I_U^new = (I_U ∩ kept) ∪ stencils of eliminated members
    std::vector<int> members;
    for (std::size_t l = 0; l < parent.dofs.size(); ++l) {
      const int i = parent.dofs[l];
      if (new_index[i] >= 0) {
        members.push_back(new_index[i]);
        reg_new.dofs.push_back(new_index[i]);
        reg_new.dist.push_back(parent.dist[l]);
      } else {
        const auto& st = rule.eliminated.at(i);
        for (int j : st.dofs) {
          const int nj = new_index[j];
          if (std::find(reg_new.dofs.begin(), reg_new.dofs.end(), nj) != reg_new.dofs.end())
            continue;
          reg_new.dofs.push_back(nj);
          // distance bound: eliminated point's distance plus the stencil offset
          reg_new.dist.push_back(parent.dist[l] + (gd.point(j) - gd.point(i)).norm());
        }
      }
    }
    // gradient columns at the probe node
    if (probe_node[r] >= 0) {
      Eigen::Matrix2Xd cols(2, int(reg_new.dofs.size()));
      for (std::size_t l = 0; l < reg_new.dofs.size(); ++l) {
        cols(0, l) = Gnew.coeff(2 * probe_node[r], reg_new.dofs[l]);
        cols(1, l) = Gnew.coeff(2 * probe_node[r] + 1, reg_new.dofs[l]);
      }
      bool is_bound = false;
      reg_new.gradient_norm = gradient_matrix_norm(cols, reg_new.diam, &is_bound);
      reg_new.gradient_norm_is_bound = is_bound;
    }
    lle.regions.push_back(std::move(reg_new));
  }
  out.gd.lle = std::move(lle);

  // the reconstruction stays piecewise constant when the parent's was and
  // every region's dof survives the elimination
  if (gd.piecewise_constant) {
    std::vector<int> regions(gd.piecewise_constant->size(), -1);
    bool ok = true;
    for (std::size_t r = 0; r < regions.size(); ++r) {
      const int i = (*gd.piecewise_constant)[r];
      if (i < 0) continue;
      if (new_index[i] < 0) {
        ok = false;
        break;
      }
      regions[r] = new_index[i];
    }
    if (ok) out.gd.piecewise_constant = std::move(regions);
  }
  return out;
}

GradientDiscretisation mass_lump(const GradientDiscretisation& gd,
                                 const LumpingPartition& partition) {
  if (int(partition.regions_of_dof.size()) != gd.n_dofs())
    throw Error("mass_lump: partition does not conform to the dof set");
  const auto& layout = *gd.pi_layout();
  std::vector<int> owner(layout.n_regions(), -1);
  for (int i = 0; i < gd.n_dofs(); ++i)
    for (int r : partition.regions_of_dof[i]) {
      if (r < 0 || r >= layout.n_regions()) throw Error("mass_lump: region id out of range");
      if (owner[r] >= 0)
        throw Error("mass_lump: region " + std::to_string(r) + " assigned to dofs " +
                    std::to_string(owner[r]) + " and " + std::to_string(i) +
                    " (regions overlap)");
      owner[r] = i;
    }

  std::vector<Triplet> trip;
  trip.reserve(layout.n_nodes());
  for (int q = 0; q < layout.n_nodes(); ++q) {
    const int i = owner[layout.region_of(q)];
    if (i >= 0) trip.emplace_back(q, i, 1.0);
  }
  SpMat P(layout.n_nodes(), gd.n_dofs());
  P.setFromTriplets(trip.begin(), trip.end());

  std::vector<Vec2> points(gd.n_dofs());
  std::vector<bool> boundary(gd.n_dofs());
  for (int i = 0; i < gd.n_dofs(); ++i) {
    points[i] = gd.point(i);
    boundary[i] = gd.is_boundary_dof(i);
  }
  GradientDiscretisation out(gd.name() + "+lumped", gd.mesh(), std::move(points),
                             std::move(boundary), gd.pi_layout(), gd.grad_layout(), std::move(P),
                             gd.gradient_map());
  out.lle = gd.lle;
  out.control = gd.control;
  out.stabilisation_comparability = gd.stabilisation_comparability;
  out.piecewise_constant = std::move(owner);
  return out;
}

namespace {

SpMat difference_gram(const GradientDiscretisation& gd, const GradientDiscretisation& gd_star) {
  if (gd.pi_layout() != gd_star.pi_layout() || gd.n_dofs() != gd_star.n_dofs())
    throw Error("reconstruction_distance: discretisations do not share layout and dof space");
  SpMat D = gd.interior_columns(gd.reconstruction_map()) -
            gd_star.interior_columns(gd_star.reconstruction_map());
  const auto& layout = *gd.pi_layout();
  Eigen::VectorXd sqw(layout.n_nodes());
  for (int q = 0; q < layout.n_nodes(); ++q) sqw[q] = std::sqrt(layout.weight(q));
  SpMat Dw = sqw.asDiagonal() * D;
  return SpMat(Dw.transpose()) * Dw;
}

SpMat gradient_gram_interior(const GradientDiscretisation& gd) {
  SpMat G = gd.interior_columns(gd.gradient_map());
  const auto& layout = *gd.grad_layout();
  Eigen::VectorXd sqw(2 * layout.n_nodes());
  for (int q = 0; q < layout.n_nodes(); ++q)
    sqw[2 * q] = sqw[2 * q + 1] = std::sqrt(layout.weight(q));
  SpMat Gw = sqw.asDiagonal() * G;
  return SpMat(Gw.transpose()) * Gw;
}

}  // namespace

double reconstruction_distance(const GradientDiscretisation& gd,
                               const GradientDiscretisation& gd_star,
                               const PencilOptions& opts) {
  const SpMat M = difference_gram(gd, gd_star);
  const SpMat K = gradient_gram_interior(gd);
  return std::sqrt(std::max(0.0, pencil_lambda_max(M, K, opts).lambda));
}

double reconstruction_distance_lower_bound(const GradientDiscretisation& gd,
                                           const GradientDiscretisation& gd_star, double p,
                                           int n_samples, std::uint64_t seed) {
  if (gd.pi_layout() != gd_star.pi_layout() || gd.n_dofs() != gd_star.n_dofs())
    throw Error("reconstruction_distance: discretisations do not share layout and dof space");
  Rng rng(seed);
  double best = 0;
  for (int s = 0; s < n_samples; ++s) {
    DofVector u = DofVector::Zero(gd.n_dofs());
    for (int i : gd.interior_dofs()) u[i] = rng.next_symmetric();
    const double denom = lp_norm(reconstruct_gradient(gd, u), p);
    if (denom == 0) continue;
    const ScalarField a = reconstruct(gd, u);
    const ScalarField b = reconstruct(gd_star, u);
    best = std::max(best, lp_distance(a, b, p) / denom);
  }
  return best;
}

}  // namespace gslab
