// Command line front end: CSV samples in, JSON reports out.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gqm/bootstrap.hpp"
#include "gqm/classical.hpp"
#include "gqm/dataset.hpp"
#include "gqm/directions.hpp"
#include "gqm/distributions.hpp"
#include "gqm/experiments.hpp"
#include "gqm/measures.hpp"
#include "gqm/quantile.hpp"
#include "gqm/report_json.hpp"
#include "gqm/rng.hpp"

namespace {

using gqm::Vector;

Vector parse_vector(const std::string& text) {
  std::vector<double> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw gqm::InvalidDataError("cannot parse '" + item + "' as a number");
    }
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  if (parts.empty()) throw gqm::InvalidDataError("empty vector literal");
  Vector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v(static_cast<Eigen::Index>(i)) = parts[i];
  return v;
}

gqm::DirectionSet build_directions(Eigen::Index dim, const std::string& kind, int k,
                                   std::uint64_t dir_seed) {
  if (dim == 1) return gqm::line_pair();
  if (kind == "sphere" || dim > 2) {
    return gqm::sphere_uniform(static_cast<int>(dim), k, dir_seed);
  }
  return gqm::circle_grid(k);
}

struct IoOptions {
  std::string data_path;
  bool header = false;
};

gqm::Dataset load(const IoOptions& io) { return gqm::read_csv(io.data_path, io.header); }

void add_io(CLI::App* cmd, IoOptions& io) {
  cmd->add_option("--data", io.data_path, "input CSV, one observation per row")->required();
  cmd->add_flag("--header", io.header, "first CSV line is a header");
}

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 10000;
};

void add_solver(CLI::App* cmd, SolverOptions& opt) {
  cmd->add_option("--tol", opt.tol, "relative step tolerance");
  cmd->add_option("--max-iter", opt.max_iter, "iteration cap per solve");
}

gqm::SolverConfig solver_config(const SolverOptions& opt) {
  gqm::SolverConfig config;
  config.tol = opt.tol;
  config.max_iter = opt.max_iter;
  return config;
}

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gqm::IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw gqm::IoError("write to '" + path + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geometric quantiles and direction-set measures"};
  app.require_subcommand(1);

  // ---- sample ------------------------------------------------------------
  auto* c_sample = app.add_subcommand("sample", "draw a simulation dataset as CSV");
  std::string s_dist = "sphericity";
  int s_nu = 2;
  int s_N = 300;
  std::uint64_t s_seed = 1;
  std::string s_out;
  bool s_header = false;
  c_sample->add_option("--dist", s_dist, "dispersion|skewness|kurtosis|sphericity");
  c_sample->add_option("--nu", s_nu, "variant 0, 1 or 2")->check(CLI::Range(0, 2));
  c_sample->add_option("-N,--size", s_N, "observations")->check(CLI::PositiveNumber);
  c_sample->add_option("--seed", s_seed, "RNG seed");
  c_sample->add_option("-o,--out", s_out, "output file (default: stdout)");
  c_sample->add_flag("--header", s_header, "write a v1,...,vn header line");

  // ---- quantile ----------------------------------------------------------
  auto* c_quantile = app.add_subcommand("quantile", "geometric quantile of a sample");
  IoOptions q_io;
  SolverOptions q_solver;
  std::string q_u, q_xi;
  double q_beta = -1.0;
  bool q_median = false;
  add_io(c_quantile, q_io);
  add_solver(c_quantile, q_solver);
  c_quantile->add_option("-u,--index", q_u, "index vector, e.g. '0.3,0.1' (norm < 1)");
  c_quantile->add_option("--beta", q_beta, "magnitude in [0,1), used with --xi");
  c_quantile->add_option("--xi", q_xi, "unit direction, used with --beta");
  c_quantile->add_flag("--median", q_median, "spatial median (index 0)");

  // ---- measures ----------------------------------------------------------
  auto* c_measures = app.add_subcommand("measures", "direction-set measures of a sample");
  IoOptions m_io;
  SolverOptions m_solver;
  double m_beta = 0.5;
  double m_beta_lo = 0.0, m_beta_hi = 0.0;
  int m_k = 24;
  std::string m_dirs = "circle";
  std::uint64_t m_dir_seed = 1;
  int m_threads = 1;
  add_io(c_measures, m_io);
  add_solver(c_measures, m_solver);
  c_measures->add_option("--beta", m_beta, "quantile magnitude");
  c_measures->add_option("--beta-lo", m_beta_lo, "kurtosis denominator magnitude");
  c_measures->add_option("--beta-hi", m_beta_hi, "kurtosis numerator magnitude");
  c_measures->add_option("-k,--directions", m_k, "direction count")->check(CLI::PositiveNumber);
  c_measures->add_option("--dirs", m_dirs, "circle|sphere (1-d data always uses the +/-1 pair)")
      ->check(CLI::IsMember({"circle", "sphere"}));
  c_measures->add_option("--dir-seed", m_dir_seed, "seed for sphere directions");
  c_measures->add_option("--threads", m_threads, "worker threads")->check(CLI::PositiveNumber);

  // ---- classical ---------------------------------------------------------
  auto* c_classical = app.add_subcommand("classical", "moment and order-statistic measures");
  IoOptions cl_io;
  double cl_beta = 0.5, cl_beta_lo = 0.2, cl_beta_hi = 0.8;
  add_io(c_classical, cl_io);
  c_classical->add_option("--beta", cl_beta, "quantile magnitude");
  c_classical->add_option("--beta-lo", cl_beta_lo, "ratio denominator magnitude");
  c_classical->add_option("--beta-hi", cl_beta_hi, "ratio numerator magnitude");

  // ---- bootstrap ---------------------------------------------------------
  auto* c_bootstrap = app.add_subcommand("bootstrap", "pivotal bootstrap confidence ball");
  IoOptions b_io;
  SolverOptions b_solver;
  std::string b_stat = "median";
  std::string b_u;
  double b_beta = 0.5;
  int b_k = 24;
  std::string b_dirs = "circle";
  std::uint64_t b_dir_seed = 1;
  double b_level = 0.95;
  int b_T = 200;
  std::uint64_t b_seed = 1;
  int b_threads = 1;
  add_io(c_bootstrap, b_io);
  add_solver(c_bootstrap, b_solver);
  c_bootstrap->add_option("--stat", b_stat, "median|quantile|gamma2|mean")
      ->check(CLI::IsMember({"median", "quantile", "gamma2", "mean"}));
  c_bootstrap->add_option("-u,--index", b_u, "index vector for --stat quantile");
  c_bootstrap->add_option("--beta", b_beta, "magnitude for --stat gamma2");
  c_bootstrap->add_option("-k,--directions", b_k, "direction count for --stat gamma2");
  c_bootstrap->add_option("--dirs", b_dirs, "circle|sphere for --stat gamma2")
      ->check(CLI::IsMember({"circle", "sphere"}));
  c_bootstrap->add_option("--dir-seed", b_dir_seed, "seed for sphere directions");
  c_bootstrap->add_option("--level", b_level, "nominal confidence in (0,1)");
  c_bootstrap->add_option("-T,--replicates", b_T, "bootstrap replicates")
      ->check(CLI::PositiveNumber);
  c_bootstrap->add_option("--seed", b_seed, "bootstrap RNG seed");
  c_bootstrap->add_option("--threads", b_threads, "worker threads")->check(CLI::PositiveNumber);

  // ---- coverage ----------------------------------------------------------
  auto* c_coverage = app.add_subcommand("coverage", "empirical coverage of a bootstrap ball");
  SolverOptions cv_solver;
  std::string cv_dist = "sphericity";
  int cv_nu = 2;
  int cv_N = 300;
  std::string cv_stat = "median";
  std::string cv_u;
  double cv_beta = 0.5;
  int cv_k = 24;
  std::string cv_truth;
  double cv_level = 0.95;
  int cv_T = 200;
  int cv_reps = 100;
  std::uint64_t cv_seed = 1;
  int cv_threads = 1;
  add_solver(c_coverage, cv_solver);
  c_coverage->add_option("--dist", cv_dist, "dispersion|skewness|kurtosis|sphericity");
  c_coverage->add_option("--nu", cv_nu, "variant 0, 1 or 2")->check(CLI::Range(0, 2));
  c_coverage->add_option("-N,--size", cv_N, "observations per dataset")
      ->check(CLI::PositiveNumber);
  c_coverage->add_option("--stat", cv_stat, "median|quantile|gamma2|mean")
      ->check(CLI::IsMember({"median", "quantile", "gamma2", "mean"}));
  c_coverage->add_option("-u,--index", cv_u, "index vector for --stat quantile");
  c_coverage->add_option("--beta", cv_beta, "magnitude for --stat gamma2");
  c_coverage->add_option("-k,--directions", cv_k, "direction count for --stat gamma2");
  c_coverage->add_option("--truth", cv_truth, "true statistic value, e.g. '0,0'")->required();
  c_coverage->add_option("--level", cv_level, "nominal confidence in (0,1)");
  c_coverage->add_option("-T,--replicates", cv_T, "bootstrap replicates")
      ->check(CLI::PositiveNumber);
  c_coverage->add_option("--reps", cv_reps, "datasets to draw")->check(CLI::PositiveNumber);
  c_coverage->add_option("--seed", cv_seed, "base seed");
  c_coverage->add_option("--threads", cv_threads, "worker threads")->check(CLI::PositiveNumber);

  // ---- table -------------------------------------------------------------
  auto* c_table = app.add_subcommand("table", "one of the simulation tables t1..t7");
  SolverOptions t_solver;
  std::string t_id = "t3";
  int t_sims = 100;
  int t_N = 300;
  std::uint64_t t_seed = 1;
  int t_threads = 1;
  int t_k = 0;
  double t_beta = 0.0, t_beta_lo = 0.0, t_beta_hi = 0.0;
  add_solver(c_table, t_solver);
  c_table->add_option("--id", t_id, "t1..t7")->required();
  c_table->add_option("--sims", t_sims, "simulations per cell")->check(CLI::PositiveNumber);
  c_table->add_option("-N,--size", t_N, "observations per simulation")
      ->check(CLI::PositiveNumber);
  c_table->add_option("--seed", t_seed, "base seed");
  c_table->add_option("--threads", t_threads, "worker threads")->check(CLI::PositiveNumber);
  c_table->add_option("-k,--directions", t_k, "override the table's direction count");
  c_table->add_option("--beta", t_beta, "override the table's beta");
  c_table->add_option("--beta-lo", t_beta_lo, "override the ratio denominator");
  c_table->add_option("--beta-hi", t_beta_hi, "override the ratio numerator");

  // ---- contours ----------------------------------------------------------
  auto* c_contours = app.add_subcommand("contours", "median-centered quantile contours");
  SolverOptions ct_solver;
  std::string ct_dist = "dispersion";
  double ct_beta = 0.5;
  int ct_k = 24;
  int ct_N = 5000;
  std::uint64_t ct_seed = 1;
  int ct_threads = 1;
  std::string ct_csv, ct_svg;
  add_solver(c_contours, ct_solver);
  c_contours->add_option("--dist", ct_dist, "dispersion|skewness|kurtosis|sphericity");
  c_contours->add_option("--beta", ct_beta, "contour magnitude");
  c_contours->add_option("-k,--directions", ct_k, "grid size")->check(CLI::PositiveNumber);
  c_contours->add_option("-N,--size", ct_N, "observations per variant")
      ->check(CLI::PositiveNumber);
  c_contours->add_option("--seed", ct_seed, "base seed");
  c_contours->add_option("--threads", ct_threads, "worker threads")->check(CLI::PositiveNumber);
  c_contours->add_option("--csv", ct_csv, "write vertices CSV to this file");
  c_contours->add_option("--svg", ct_svg, "write an SVG rendering to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_sample) {
      const gqm::SimDistribution dist{gqm::characteristic_from_string(s_dist), s_nu};
      const gqm::Dataset data = gqm::sample(dist, s_N, s_seed);
      if (s_out.empty()) {
        gqm::write_csv(std::cout, data, s_header);
      } else {
        gqm::write_csv(std::filesystem::path(s_out), data, s_header);
      }
    } else if (*c_quantile) {
      const gqm::Dataset data = load(q_io);
      std::optional<gqm::QuantileIndex> index;
      if (!q_u.empty()) {
        index.emplace(parse_vector(q_u));
      } else if (!q_xi.empty() || q_beta >= 0.0) {
        if (q_xi.empty() || q_beta < 0.0) {
          throw gqm::InvalidDataError("--beta and --xi must be given together");
        }
        index = gqm::QuantileIndex::from_polar(q_beta, parse_vector(q_xi));
      } else if (q_median) {
        index = gqm::QuantileIndex::median(data.dim());
      } else {
        throw gqm::InvalidDataError("choose one of --index, --beta/--xi, --median");
      }
      emit(gqm::to_json(gqm::geometric_quantile(data, *index, solver_config(q_solver))));
    } else if (*c_measures) {
      const gqm::Dataset data = load(m_io);
      gqm::MeasureParams params;
      params.beta = m_beta;
      if (c_measures->count("--beta-lo") || c_measures->count("--beta-hi")) {
        params.beta_lo = m_beta_lo;
        params.beta_hi = m_beta_hi;
      }
      params.dirs = build_directions(data.dim(), m_dirs, m_k, m_dir_seed);
      params.solver = solver_config(m_solver);
      params.threads = m_threads;
      emit(gqm::to_json(gqm::measures(data, params), params.dirs));
    } else if (*c_classical) {
      const gqm::Dataset data = load(cl_io);
      emit(gqm::to_json(gqm::classical_report(data, cl_beta, cl_beta_lo, cl_beta_hi)));
    } else if (*c_bootstrap || *c_coverage) {
      const std::string stat = *c_bootstrap ? b_stat : cv_stat;
      const std::string u_text = *c_bootstrap ? b_u : cv_u;
      const double beta = *c_bootstrap ? b_beta : cv_beta;
      const int k = *c_bootstrap ? b_k : cv_k;
      const gqm::SolverConfig solver =
          solver_config(*c_bootstrap ? b_solver : cv_solver);

      // The estimator closes over everything it needs; direction sets for
      // gamma2 are built per call from the resample's dimension (constant
      // across resamples, but this keeps the closure self-contained).
      const auto estimator = [&, stat, u_text, beta, k,
                              solver](const gqm::Dataset& d) -> Vector {
        if (stat == "mean") return d.centroid();
        if (stat == "median") {
          return gqm::geometric_quantile(d, gqm::QuantileIndex::median(d.dim()), solver).p;
        }
        if (stat == "quantile") {
          if (u_text.empty()) throw gqm::InvalidDataError("--stat quantile needs --index");
          return gqm::geometric_quantile(d, gqm::QuantileIndex(parse_vector(u_text)), solver).p;
        }
        gqm::MeasureParams params;
        params.beta = beta;
        params.dirs = build_directions(d.dim(), *c_bootstrap ? b_dirs : "circle", k,
                                       *c_bootstrap ? b_dir_seed : 1);
        params.solver = solver;
        return gqm::skewness(d, params).second;
      };

      if (*c_bootstrap) {
        const gqm::Dataset data = load(b_io);
        emit(gqm::to_json(
            gqm::bootstrap_region(data, estimator, b_level, b_T, b_seed, b_threads)));
      } else {
        const gqm::SimDistribution dist{gqm::characteristic_from_string(cv_dist), cv_nu};
        emit(gqm::to_json(gqm::coverage_study(dist, cv_N, estimator, parse_vector(cv_truth),
                                              cv_level, cv_T, cv_reps, cv_seed, cv_threads)));
      }
    } else if (*c_table) {
      gqm::ExperimentSpec spec =
          gqm::default_spec(gqm::table_from_string(t_id), t_sims, t_N, t_seed);
      spec.threads = t_threads;
      spec.solver = solver_config(t_solver);
      if (c_table->count("--directions")) spec.k = t_k;
      if (c_table->count("--beta")) spec.beta = t_beta;
      if (c_table->count("--beta-lo")) spec.beta_lo = t_beta_lo;
      if (c_table->count("--beta-hi")) spec.beta_hi = t_beta_hi;
      emit(gqm::to_json(gqm::run_table(spec)));
    } else if (*c_contours) {
      const gqm::ContourSet contours =
          gqm::compute_contours(gqm::characteristic_from_string(ct_dist), ct_beta, ct_k, ct_N,
                                ct_seed, solver_config(ct_solver), ct_threads);
      if (!ct_csv.empty()) write_text(ct_csv, gqm::contour_csv(contours));
      if (!ct_svg.empty()) write_text(ct_svg, gqm::contour_svg(contours));
      if (ct_csv.empty() && ct_svg.empty()) std::cout << gqm::contour_csv(contours);
    }
  } catch (const gqm::Error& e) {
    nlohmann::json err{{"error", e.code()}, {"message", e.what()}};
    if (const auto* nc = dynamic_cast<const gqm::NonconvergenceError*>(&e)) {
      err["direction_index"] = nc->direction_index();
    }
    std::cerr << err.dump(2) << '\n';
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", "internal"}, {"message", e.what()}};
    std::cerr << err.dump(2) << '\n';
    return 1;
  }
  return 0;
}
