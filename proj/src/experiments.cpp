#include "gqm/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "gqm/classical.hpp"
#include "gqm/parallel.hpp"
#include "gqm/quantile.hpp"
#include "gqm/rng.hpp"

namespace gqm {

namespace {

bool is_degeneracy(const Error& e) {
  const std::string& code = e.code();
  return code == "collinear_data" || code == "degenerate_dispersion" ||
         code == "degenerate_radius" || code == "nonconvergence" ||
         code == "singular_covariance";
}

// Shortest round-trip decimal (CSV payloads).
void append_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

// Fixed two decimals (SVG pixel coordinates), with -0.00 normalized away.
void append_fixed2(std::string& out, double v) {
  if (v > -0.005 && v < 0.0) v = 0.0;
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  out.append(buf, res.ptr);
}

void append_int(std::string& out, long v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

// How a column condenses its per-simulation values into one cell.
enum class CellAggregate {
  scalar_mean,      // mean of the per-simulation scalars
  abs_scalar_mean,  // |mean of the signed per-simulation scalars|
  vector_norm_mean  // norm of the componentwise mean of per-simulation vectors
};

struct ColumnPlan {
  std::string name;
  CellAggregate aggregate = CellAggregate::scalar_mean;
  int width = 1;  // per-simulation value slots this column consumes
};

struct BlockPlan {
  Characteristic characteristic;
  std::vector<ColumnPlan> columns;
};

bool is_measure_table(TableId t) {
  return t == TableId::t3 || t == TableId::t5 || t == TableId::t6 || t == TableId::t7;
}

std::vector<BlockPlan> plan_for(TableId table) {
  switch (table) {
    case TableId::t1:
      return {{Characteristic::dispersion, {{"frechet_variance"}}},
              {Characteristic::skewness, {{"mardia_skewness"}}},
              {Characteristic::kurtosis, {{"mardia_kurtosis"}}}};
    case TableId::t2:
    case TableId::t4:
      // The reported skewness figure is |mean(gamma0)|: the sign of gamma0 is
      // informative within one simulation but the summary is its magnitude.
      return {{Characteristic::dispersion, {{"delta0_v1"}, {"delta0_v2"}}},
              {Characteristic::skewness,
               {{"abs_gamma0_v1", CellAggregate::abs_scalar_mean},
                {"abs_gamma0_v2", CellAggregate::abs_scalar_mean}}},
              {Characteristic::kurtosis, {{"kappa0_v1"}, {"kappa0_v2"}}}};
    default:
      // norm_gamma2 averages the per-simulation skewness VECTORS and reports
      // the norm of that mean; per-simulation direction noise largely cancels
      // across simulations, which a mean of norms would instead accumulate.
      return {{Characteristic::dispersion, {{"delta1"}, {"delta2"}}},
              {Characteristic::skewness,
               {{"gamma1"}, {"norm_gamma2", CellAggregate::vector_norm_mean, 2}}},
              {Characteristic::kurtosis, {{"kappa1"}, {"kappa2"}}},
              {Characteristic::sphericity, {{"alpha"}}}};
  }
}

// Per-simulation values for the columns one characteristic feeds, in the
// order of the block's names.
std::vector<double> eval_block(const ExperimentSpec& spec, const DirectionSet& dirs,
                               Characteristic c, const Dataset& data) {
  switch (spec.table) {
    case TableId::t1:
      switch (c) {
        case Characteristic::dispersion:
          return {frechet_variance(data)};
        case Characteristic::skewness:
          return {mardia_skewness(data)};
        default:
          return {mardia_kurtosis(data)};
      }
    case TableId::t2:
    case TableId::t4: {
      std::vector<double> out;
      out.reserve(static_cast<std::size_t>(data.dim()));
      std::vector<double> column(static_cast<std::size_t>(data.size()));
      for (Eigen::Index j = 0; j < data.dim(); ++j) {
        for (Eigen::Index i = 0; i < data.size(); ++i) {
          column[static_cast<std::size_t>(i)] = data.points()(i, j);
        }
        const UnivariateMeasures m =
            univariate_quantile_measures(column, spec.beta, spec.beta_lo, spec.beta_hi);
        switch (c) {
          case Characteristic::dispersion:
            out.push_back(m.delta0);
            break;
          case Characteristic::skewness:
            out.push_back(m.gamma0);  // signed; |.| is applied to the mean
            break;
          default:
            out.push_back(m.kappa0);
            break;
        }
      }
      return out;
    }
    default: {
      MeasureParams params;
      params.beta = spec.beta;
      params.dirs = dirs;
      params.solver = spec.solver;
      params.threads = 1;  // parallelism runs across simulations
      switch (c) {
        case Characteristic::dispersion: {
          const auto [d1, d2] = dispersion(data, params);
          return {d1, d2};
        }
        case Characteristic::skewness: {
          const auto [g1, g2] = skewness(data, params);
          return {g1, g2(0), g2(1)};  // simulation draws are bivariate
        }
        case Characteristic::kurtosis: {
          params.beta_lo = spec.beta_lo;
          params.beta_hi = spec.beta_hi;
          const auto [k1, k2] = kurtosis(data, params);
          return {k1, k2};
        }
        default:
          return {spherical_asymmetry(data, params)};
      }
    }
  }
}

}  // namespace

const char* to_string(TableId id) {
  switch (id) {
    case TableId::t1: return "t1";
    case TableId::t2: return "t2";
    case TableId::t3: return "t3";
    case TableId::t4: return "t4";
    case TableId::t5: return "t5";
    case TableId::t6: return "t6";
    case TableId::t7: return "t7";
  }
  return "t3";
}

TableId table_from_string(const std::string& name) {
  if (name == "t1") return TableId::t1;
  if (name == "t2") return TableId::t2;
  if (name == "t3") return TableId::t3;
  if (name == "t4") return TableId::t4;
  if (name == "t5") return TableId::t5;
  if (name == "t6") return TableId::t6;
  if (name == "t7") return TableId::t7;
  throw InvalidDataError("unknown table '" + name + "' (expected t1..t7)");
}

ExperimentSpec default_spec(TableId table, int sims, int N, std::uint64_t base_seed) {
  ExperimentSpec spec;
  spec.table = table;
  spec.sims = sims;
  spec.N = N;
  spec.base_seed = base_seed;
  switch (table) {
    case TableId::t1:
    case TableId::t2:
    case TableId::t3:
      break;  // beta 0.5, ratio (0.2, 0.8), k 24
    case TableId::t4:
    case TableId::t5:
      spec.beta = 0.98;
      spec.beta_hi = 0.98;
      break;
    case TableId::t6:
      spec.k = 72;
      break;
    case TableId::t7:
      spec.k = 72;
      spec.beta = 0.98;
      spec.beta_hi = 0.98;
      break;
  }
  return spec;
}

TableReport run_table(const ExperimentSpec& spec) {
  if (spec.sims < 2) throw InvalidDataError("need at least two simulations per cell");
  if (spec.N < 2) throw InvalidDataError("need at least two observations per simulation");
  if (!(spec.beta > 0.0 && spec.beta < 1.0) || !(spec.beta_lo > 0.0) ||
      !(spec.beta_lo < spec.beta_hi) || !(spec.beta_hi < 1.0)) {
    throw InvalidDataError("table magnitudes must satisfy 0 < beta < 1 and 0 < beta_lo < beta_hi < 1");
  }
  if (is_measure_table(spec.table) && spec.k < 1) {
    throw InvalidDataError("need at least one direction");
  }

  const std::vector<BlockPlan> plan = plan_for(spec.table);
  DirectionSet dirs;
  if (is_measure_table(spec.table)) dirs = circle_grid(spec.k);

  TableReport report;
  report.spec = spec;
  for (const BlockPlan& block : plan) {
    for (const ColumnPlan& col : block.columns) {
      TableColumn column;
      column.name = col.name;
      column.characteristic = block.characteristic;
      report.columns.push_back(std::move(column));
    }
  }

  const long total_sims = static_cast<long>(spec.sims) * static_cast<long>(plan.size()) * 3;
  long retries = 0;

  std::size_t column_offset = 0;
  for (const BlockPlan& block : plan) {
    const std::size_t ncols = block.columns.size();
    const int char_idx = static_cast<int>(block.characteristic);
    for (int nu = 0; nu < 3; ++nu) {
      const std::uint64_t block_seed =
          derive_seed(spec.base_seed, static_cast<std::uint64_t>(char_idx * 3 + nu));
      const SimDistribution dist{block.characteristic, nu};

      std::vector<std::vector<double>> values(static_cast<std::size_t>(spec.sims));
      std::vector<signed char> failed(static_cast<std::size_t>(spec.sims), 0);
      parallel_for(spec.sims, spec.threads, [&](std::int64_t i) {
        const Dataset data = sample(dist, spec.N, block_seed + static_cast<std::uint64_t>(i));
        try {
          values[static_cast<std::size_t>(i)] = eval_block(spec, dirs, block.characteristic, data);
        } catch (const Error& e) {
          if (!is_degeneracy(e)) throw;
          failed[static_cast<std::size_t>(i)] = 1;
        }
      });

      // Replacement draws happen serially, in simulation order, so the
      // retry ordinals (and therefore all results) are thread-count free.
      long retry_ordinal = 0;
      for (int i = 0; i < spec.sims; ++i) {
        if (!failed[static_cast<std::size_t>(i)]) continue;
        for (;;) {
          ++retries;
          if (retries * 20 > total_sims) {
            throw ExperimentFailureError("more than 5% of simulations failed (" +
                                         std::to_string(retries) + " retries for " +
                                         std::to_string(total_sims) + " simulations)");
          }
          const std::uint64_t seed = block_seed + static_cast<std::uint64_t>(spec.sims) +
                                     static_cast<std::uint64_t>(retry_ordinal++);
          const Dataset data = sample(dist, spec.N, seed);
          try {
            values[static_cast<std::size_t>(i)] = eval_block(spec, dirs, block.characteristic, data);
            break;
          } catch (const Error& e) {
            if (!is_degeneracy(e)) throw;
          }
        }
      }

      std::size_t slot = 0;
      for (std::size_t c = 0; c < ncols; ++c) {
        const ColumnPlan& col = block.columns[c];
        const std::size_t width = static_cast<std::size_t>(col.width);

        // Componentwise means over the simulations.
        std::vector<double> comp_mean(width, 0.0);
        for (std::size_t w = 0; w < width; ++w) {
          for (int i = 0; i < spec.sims; ++i) {
            comp_mean[w] += values[static_cast<std::size_t>(i)][slot + w];
          }
          comp_mean[w] /= static_cast<double>(spec.sims);
        }

        // The scatter figure comes from the per-simulation scalars: the
        // signed value for scalar columns, the norm for vector columns.
        std::vector<double> scalar(static_cast<std::size_t>(spec.sims));
        for (int i = 0; i < spec.sims; ++i) {
          const std::vector<double>& row = values[static_cast<std::size_t>(i)];
          if (col.aggregate == CellAggregate::vector_norm_mean) {
            double sq = 0.0;
            for (std::size_t w = 0; w < width; ++w) sq += row[slot + w] * row[slot + w];
            scalar[static_cast<std::size_t>(i)] = std::sqrt(sq);
          } else {
            scalar[static_cast<std::size_t>(i)] = row[slot];
          }
        }
        double scalar_mean = 0.0;
        for (double v : scalar) scalar_mean += v;
        scalar_mean /= static_cast<double>(spec.sims);
        double ss = 0.0;
        for (double v : scalar) {
          const double d = v - scalar_mean;
          ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(spec.sims - 1));

        double mean = comp_mean[0];
        if (col.aggregate == CellAggregate::abs_scalar_mean) {
          mean = std::abs(mean);
        } else if (col.aggregate == CellAggregate::vector_norm_mean) {
          double sq = 0.0;
          for (double m : comp_mean) sq += m * m;
          mean = std::sqrt(sq);
        }

        TableCell& cell = report.columns[column_offset + c].cells[static_cast<std::size_t>(nu)];
        cell.nu = nu;
        cell.mean = mean;
        cell.se = sd / std::sqrt(static_cast<double>(spec.sims));
        cell.sims = spec.sims;
        slot += width;
      }
    }
    column_offset += ncols;
  }

  for (TableColumn& column : report.columns) {
    column.monotone_decreasing = column.cells[0].mean > column.cells[1].mean &&
                                 column.cells[1].mean > column.cells[2].mean;
  }
  report.retries = retries;
  return report;
}

ContourSet compute_contours(Characteristic characteristic, double beta, int k, int N,
                            std::uint64_t base_seed, const SolverConfig& solver, int threads) {
  if (k < 1) throw InvalidDataError("need at least one direction");
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidDataError("beta must lie in (0, 1)");
  if (N < 2) throw InvalidDataError("need at least two observations");

  ContourSet out;
  out.characteristic = characteristic;
  out.beta = beta;
  out.k = k;
  out.N = N;
  out.base_seed = base_seed;

  const DirectionSet grid = circle_grid(k);
  for (int nu = 0; nu < 3; ++nu) {
    const Dataset data =
        sample({characteristic, nu}, N, base_seed + static_cast<std::uint64_t>(nu));
    const QuantilePoint med = geometric_quantile(data, QuantileIndex::median(2), solver);
    if (!med.converged) {
      throw NonconvergenceError("median solve for variant " + std::to_string(nu) +
                                " did not converge",
                                -1);
    }
    Matrix vertices(k, 2);
    parallel_for(k, threads, [&](std::int64_t l) {
      const Vector xi = grid.dirs.row(l).transpose();
      const QuantilePoint qp =
          geometric_quantile(data, QuantileIndex::from_polar(beta, xi), solver);
      if (!qp.converged) {
        throw NonconvergenceError("contour solve for variant " + std::to_string(nu) +
                                  ", direction " + std::to_string(l) + " did not converge",
                                  l);
      }
      vertices.row(l) = (qp.p - med.p).transpose();
    });
    out.vertices[static_cast<std::size_t>(nu)] = std::move(vertices);
    out.medians[static_cast<std::size_t>(nu)] = med.p;
  }
  return out;
}

std::string contour_csv(const ContourSet& contours) {
  std::string out = "nu,index,x,y\n";
  for (int nu = 0; nu < 3; ++nu) {
    const Matrix& v = contours.vertices[static_cast<std::size_t>(nu)];
    for (Eigen::Index l = 0; l < v.rows(); ++l) {
      append_int(out, nu);
      out.push_back(',');
      append_int(out, static_cast<long>(l) + 1);
      out.push_back(',');
      append_double(out, v(l, 0));
      out.push_back(',');
      append_double(out, v(l, 1));
      out.push_back('\n');
    }
  }
  return out;
}

std::string contour_svg(const ContourSet& contours) {
  constexpr int kPlot = 640;       // square plot region
  constexpr int kCaption = 60;     // caption strip below the plot
  constexpr double kMargin = 48.0;
  static const char* kStroke[3] = {"#e07b00", "#2f9e44", "#d6302b"};  // nu = 0, 1, 2

  // Bounding box over every vertex and the shared origin.
  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  for (const Matrix& v : contours.vertices) {
    for (Eigen::Index l = 0; l < v.rows(); ++l) {
      min_x = std::min(min_x, v(l, 0));
      max_x = std::max(max_x, v(l, 0));
      min_y = std::min(min_y, v(l, 1));
      max_y = std::max(max_y, v(l, 1));
    }
  }
  const double span_x = max_x - min_x;
  const double span_y = max_y - min_y;
  const double avail = kPlot - 2.0 * kMargin;
  double scale = 0.0;  // pixels per data unit, shared by both axes
  if (span_x > 0.0) scale = avail / span_x;
  if (span_y > 0.0) scale = scale > 0.0 ? std::min(scale, avail / span_y) : avail / span_y;
  if (scale <= 0.0) scale = 1.0;
  const double off_x = kMargin + 0.5 * (avail - span_x * scale);
  const double off_y = kMargin + 0.5 * (avail - span_y * scale);
  const auto px = [&](double x) { return off_x + (x - min_x) * scale; };
  const auto py = [&](double y) { return off_y + (max_y - y) * scale; };

  std::string svg;
  svg.reserve(8192);
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
  append_int(svg, kPlot);
  svg += "\" height=\"";
  append_int(svg, kPlot + kCaption);
  svg += "\" viewBox=\"0 0 ";
  append_int(svg, kPlot);
  svg.push_back(' ');
  append_int(svg, kPlot + kCaption);
  svg += "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  for (int nu = 0; nu < 3; ++nu) {
    const Matrix& v = contours.vertices[static_cast<std::size_t>(nu)];
    if (v.rows() == 0) continue;
    svg += "<path d=\"";
    for (Eigen::Index l = 0; l < v.rows(); ++l) {
      svg += (l == 0) ? "M " : " L ";
      append_fixed2(svg, px(v(l, 0)));
      svg.push_back(' ');
      append_fixed2(svg, py(v(l, 1)));
    }
    svg += " Z\" fill=\"none\" stroke=\"";
    svg += kStroke[nu];
    svg += "\" stroke-width=\"1.5\"/>\n";
  }

  // The shared median sits at the data origin.
  svg += "<circle cx=\"";
  append_fixed2(svg, px(0.0));
  svg += "\" cy=\"";
  append_fixed2(svg, py(0.0));
  svg += "\" r=\"4\" fill=\"#1c5dd6\"/>\n";

  for (int nu = 0; nu < 3; ++nu) {
    svg += "<text x=\"12\" y=\"";
    append_int(svg, 20 + 18 * nu);
    svg += "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"";
    svg += kStroke[nu];
    svg += "\">nu = ";
    append_int(svg, nu);
    svg += "</text>\n";
  }

  svg += "<text x=\"";
  append_int(svg, kPlot / 2);
  svg += "\" y=\"";
  append_int(svg, kPlot + 24);
  svg += "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#202020\">";
  svg += to_string(contours.characteristic);
  svg += " family: median-centered quantile contours, beta = ";
  append_double(svg, contours.beta);
  svg += ", k = ";
  append_int(svg, contours.k);
  svg += ", N = ";
  append_int(svg, contours.N);
  svg += "</text>\n";
  svg += "<text x=\"";
  append_int(svg, kPlot / 2);
  svg += "\" y=\"";
  append_int(svg, kPlot + 44);
  svg += "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#606060\">";
  svg += "all variants share one scale; the blue dot marks the common median (origin)";
  svg += "</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace gqm
