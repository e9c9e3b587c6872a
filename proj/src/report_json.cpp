#include "gqm/report_json.hpp"

namespace gqm {

namespace {

nlohmann::json vector_json(const Vector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

const char* construction_name(DirectionConstruction c) {
  switch (c) {
    case DirectionConstruction::circle_grid: return "circle_grid";
    case DirectionConstruction::sphere_uniform: return "sphere_uniform";
    case DirectionConstruction::line_pair: return "line_pair";
  }
  return "circle_grid";
}

}  // namespace

nlohmann::json to_json(const QuantilePoint& point) {
  return {{"point", vector_json(point.p)},
          {"iterations", point.iterations},
          {"converged", point.converged},
          {"final_step", point.final_step}};
}

nlohmann::json to_json(const MeasureReport& report, const DirectionSet& dirs) {
  nlohmann::json j;
  j["beta"] = report.beta;
  if (report.beta_lo) j["beta_lo"] = *report.beta_lo;
  if (report.beta_hi) j["beta_hi"] = *report.beta_hi;
  j["delta1"] = report.delta1;
  j["delta2"] = report.delta2;
  j["gamma1"] = report.gamma1;
  j["gamma2"] = vector_json(report.gamma2);
  j["norm_gamma2"] = report.gamma2.size() == 1 ? std::abs(report.gamma2(0))
                                               : report.gamma2.norm();
  if (report.kappa1) j["kappa1"] = *report.kappa1;
  if (report.kappa2) j["kappa2"] = *report.kappa2;
  j["alpha"] = report.alpha;
  j["median"] = vector_json(report.median);
  if (report.delta1_lo) j["delta1_lo"] = *report.delta1_lo;
  if (report.delta2_lo) j["delta2_lo"] = *report.delta2_lo;
  if (report.delta1_hi) j["delta1_hi"] = *report.delta1_hi;
  if (report.delta2_hi) j["delta2_hi"] = *report.delta2_hi;

  nlohmann::json set;
  set["construction"] = construction_name(dirs.construction);
  set["k"] = static_cast<long>(dirs.k());
  set["dim"] = static_cast<long>(dirs.dim());
  if (dirs.construction == DirectionConstruction::sphere_uniform) set["seed"] = dirs.seed;
  j["directions"] = std::move(set);

  nlohmann::json per = nlohmann::json::array();
  for (const PerDirection& d : report.per_direction) {
    per.push_back({{"xi", vector_json(d.xi)},
                   {"q_plus", vector_json(d.q_plus)},
                   {"q_minus", vector_json(d.q_minus)}});
  }
  j["per_direction"] = std::move(per);

  j["diagnostics"] = {{"total_solves", report.diagnostics.total_solves},
                      {"max_iterations", report.diagnostics.max_iterations},
                      {"all_converged", report.diagnostics.all_converged}};
  return j;
}

nlohmann::json to_json(const ClassicalReport& report) {
  nlohmann::json j;
  j["frechet_variance"] = report.frechet_variance;
  j["mardia_skewness"] = report.mardia_skewness;
  j["mardia_kurtosis"] = report.mardia_kurtosis;
  j["beta"] = report.beta;
  j["beta_lo"] = report.beta_lo;
  j["beta_hi"] = report.beta_hi;
  nlohmann::json per = nlohmann::json::array();
  for (const UnivariateMeasures& m : report.per_coordinate) {
    per.push_back({{"delta0", m.delta0}, {"gamma0", m.gamma0}, {"kappa0", m.kappa0}});
  }
  j["per_coordinate"] = std::move(per);
  return j;
}

nlohmann::json to_json(const ConfidenceRegion& region) {
  return {{"center", vector_json(region.center)},
          {"radius", region.radius},
          {"level", region.level},
          {"replicates", region.replicates},
          {"redraws", region.redraws}};
}

nlohmann::json to_json(const CoverageResult& result) {
  return {{"reps", result.reps},
          {"hits", result.hits},
          {"coverage", result.coverage},
          {"redraws_total", result.redraws_total}};
}

nlohmann::json to_json(const TableReport& report) {
  nlohmann::json j;
  j["table"] = to_string(report.spec.table);
  j["sims"] = report.spec.sims;
  j["N"] = report.spec.N;
  j["k"] = report.spec.k;
  j["beta"] = report.spec.beta;
  j["beta_lo"] = report.spec.beta_lo;
  j["beta_hi"] = report.spec.beta_hi;
  j["base_seed"] = report.spec.base_seed;
  j["retries"] = report.retries;
  nlohmann::json columns = nlohmann::json::array();
  for (const TableColumn& column : report.columns) {
    nlohmann::json cells = nlohmann::json::array();
    for (const TableCell& cell : column.cells) {
      cells.push_back(
          {{"nu", cell.nu}, {"mean", cell.mean}, {"se", cell.se}, {"sims", cell.sims}});
    }
    columns.push_back({{"name", column.name},
                       {"characteristic", to_string(column.characteristic)},
                       {"cells", std::move(cells)},
                       {"monotone_decreasing", column.monotone_decreasing}});
  }
  j["columns"] = std::move(columns);
  return j;
}

}  // namespace gqm
