#include "gslab/runconfig.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gslab/measures.hpp"

namespace gslab {

namespace {

using nlohmann::json;

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp + " for writing");
    out << content;
    if (!out.good()) throw Error("short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  RunConfig cfg;
  try {
    if (!j.contains("scheme")) throw ConfigError("config: missing \"scheme\"");
    cfg.scheme_name = j["scheme"].get<std::string>();
    cfg.scheme.kind = scheme_kind_from_string(cfg.scheme_name);

    if (j.contains("stabilisation")) {
      const auto& s = j["stabilisation"];
      const std::string kind = s.value("kind", "identity");
      if (kind == "identity")
        cfg.scheme.stabilisation.kind = Stabilisation::Identity;
      else if (kind == "scaled")
        cfg.scheme.stabilisation.kind = Stabilisation::Scaled;
      else
        throw ConfigError("config: unknown stabilisation kind: " + kind);
      cfg.scheme.stabilisation.factor = s.value("factor", 1.0);
    }

    const std::string family = j.value("family", "cartesian");
    if (family == "cartesian")
      cfg.family.kind = MeshFamily::Cartesian;
    else if (family == "simplicial")
      cfg.family.kind = MeshFamily::Simplicial;
    else
      throw ConfigError("config: unknown mesh family: " + family);
    if (j.contains("base")) {
      cfg.family.base_nx = j["base"][0].get<int>();
      cfg.family.base_ny = j["base"][1].get<int>();
    }
    if (j.contains("domain")) {
      cfg.family.lo = Vec2(j["domain"][0][0].get<double>(), j["domain"][0][1].get<double>());
      cfg.family.hi = Vec2(j["domain"][1][0].get<double>(), j["domain"][1][1].get<double>());
    }
    cfg.family.perturb_amplitude = j.value("perturb", 0.0);

    cfg.levels = j.value("levels", 2);
    if (cfg.levels < 1) throw ConfigError("config: levels must be >= 1");
    cfg.problem = j.value("problem", "sin2d");
    make_problem(cfg.problem);  // validates the name
    cfg.p = j.value("p", 2.0);
    if (cfg.p <= 1.0) throw ConfigError("config: p must lie in (1, inf)");
    cfg.seed = j.value("seed", std::uint64_t(1));
    cfg.family.seed = cfg.seed;
    cfg.metrics = j.value("metrics", true);
    cfg.timings = j.value("timings", false);
    cfg.mc_samples = j.value("mc_samples", 10000);
    cfg.out_csv = j.value("out_csv", "study.csv");
    cfg.out_metrics = j.value("out_metrics", "metrics.json");

    if (j.contains("bands")) {
      const auto& b = j["bands"];
      if (b.contains("order_l2"))
        cfg.bands.order_l2 = {b["order_l2"][0].get<double>(), b["order_l2"][1].get<double>()};
      if (b.contains("order_h1"))
        cfg.bands.order_h1 = {b["order_h1"][0].get<double>(), b["order_h1"][1].get<double>()};
      if (b.contains("coercivity_ratio_max"))
        cfg.bands.coercivity_ratio_max = b["coercivity_ratio_max"].get<double>();
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

RunResult run_config(const RunConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);

  const DiffusionProblem problem = make_problem(cfg.problem);
  StudyOptions opts;
  opts.with_metrics = cfg.metrics;
  opts.timings = cfg.timings;

  RunResult result;
  result.rows = convergence_study(cfg.scheme, cfg.family, problem, cfg.levels, opts);

  // metrics records keyed by (scheme, mesh id, level, quantity)
  json records = json::array();
  const std::string mesh_id =
      (cfg.family.kind == MeshFamily::Cartesian ? "cartesian" : "simplicial") +
      std::string(cfg.family.perturb_amplitude > 0 ? "-perturbed" : "");
  auto record = [&](int level, const std::string& quantity, double value, bool lower_bound) {
    json r;
    r["scheme"] = cfg.scheme_name;
    r["mesh"] = mesh_id;
    r["level"] = level;
    r["quantity"] = quantity;
    r["value"] = value;
    if (lower_bound) r["lower_bound"] = true;
    records.push_back(r);
  };
  for (const StudyRow& row : result.rows) {
    record(row.level, "err_l2", row.err_l2, false);
    record(row.level, "err_h1", row.err_h1, false);
    if (cfg.metrics) {
      record(row.level, "coercivity", row.coercivity, false);
      record(row.level, "conformity_defect", row.conformity_defect, false);
      record(row.level, "consistency_lower", row.consistency_lower, false);
      record(row.level, "consistency_upper", row.consistency_upper, false);
    }
  }
  if (cfg.metrics && cfg.p != 2.0) {
    // away from p = 2 the extremal quantities are reported as sampled lower
    // bounds, on the coarsest level only
    MeshPtr mesh = cfg.family.build(0);
    SchemeBuild b = build_scheme(cfg.scheme, mesh);
    record(0, "coercivity", coercivity_lower_bound(b.gd, cfg.p, cfg.mc_samples, cfg.seed), true);
  }

  result.csv_path = (std::filesystem::path(out_dir) / cfg.out_csv).string();
  result.metrics_path = (std::filesystem::path(out_dir) / cfg.out_metrics).string();
  write_atomic(result.csv_path, study_csv(result.rows));
  write_atomic(result.metrics_path, records.dump(2) + "\n");

  // bands: finest-level observed orders, coercivity spread across levels
  result.bands_ok = true;
  if (result.rows.size() >= 2) {
    const StudyRow& last = result.rows.back();
    if (cfg.bands.order_l2 &&
        (last.order_l2 < cfg.bands.order_l2->first || last.order_l2 > cfg.bands.order_l2->second))
      result.bands_ok = false;
    if (cfg.bands.order_h1 &&
        (last.order_h1 < cfg.bands.order_h1->first || last.order_h1 > cfg.bands.order_h1->second))
      result.bands_ok = false;
  }
  if (cfg.bands.coercivity_ratio_max && cfg.metrics) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (const StudyRow& row : result.rows) {
      lo = std::min(lo, row.coercivity);
      hi = std::max(hi, row.coercivity);
    }
    if (hi / lo > *cfg.bands.coercivity_ratio_max) result.bands_ok = false;
  }
  return result;
}

std::string list_schemes_text() {
  std::ostringstream os;
  for (SchemeKind kind : all_scheme_kinds()) {
    const std::string text = describe_scheme(kind);
    os << text.substr(0, text.find('\n')) << "\n";
  }
  return os.str();
}

}  // namespace gslab
