#include "gqm/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <vector>

#include "gqm/parallel.hpp"
#include "gqm/rng.hpp"

namespace gqm {

namespace {

// Estimator failures that mark a resample as degenerate (and only these;
// anything else is a caller bug and propagates).
bool is_degeneracy(const Error& e) {
  const std::string& code = e.code();
  return code == "collinear_data" || code == "degenerate_dispersion" ||
         code == "degenerate_radius" || code == "nonconvergence" ||
         code == "singular_covariance";
}

std::vector<Eigen::Index> resample_rows(Rng& rng, Eigen::Index N) {
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(N));
  for (auto& r : rows) {
    r = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(N)));
  }
  return rows;
}

// ceil(level * T) with protection against the product landing a hair above
// the integer it mathematically equals.
int order_index(double level, int T) {
  const double h = level * static_cast<double>(T);
  const int k = static_cast<int>(std::ceil(h - 1e-9));
  return std::clamp(k, 1, T);
}

}  // namespace

ConfidenceRegion bootstrap_region(const Dataset& data, const Estimator& estimator,
                                  double level, int T, std::uint64_t seed, int threads) {
  if (!(level > 0.0 && level < 1.0)) throw InvalidDataError("level must lie in (0, 1)");
  if (T < 1) throw InvalidDataError("need at least one bootstrap replicate");

  const Vector center = estimator(data);  // failures here propagate

  const long redraw_cap = std::max<long>(1, static_cast<long>(0.1 * T));
  std::vector<double> distances(static_cast<std::size_t>(T), 0.0);
  std::vector<long> redraws(static_cast<std::size_t>(T), 0);
  parallel_for(T, threads, [&](std::int64_t t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    for (;;) {
      const Dataset resample = data.subset(resample_rows(rng, data.size()));
      try {
        const Vector est = estimator(resample);
        if (est.size() != center.size()) {
          throw DimensionError("estimator changed dimension across resamples");
        }
        distances[static_cast<std::size_t>(t)] = (est - center).norm();
        break;
      } catch (const Error& e) {
        if (!is_degeneracy(e)) throw;
        if (++redraws[static_cast<std::size_t>(t)] > redraw_cap) {
          throw BootstrapFailureError("replicate " + std::to_string(t) + " exceeded " +
                                      std::to_string(redraw_cap) + " redraws: " + e.what());
        }
      }
    }
  });

  long total_redraws = 0;
  for (long r : redraws) total_redraws += r;
  if (total_redraws * 10 > T) {
    throw BootstrapFailureError("more than 10% of resamples were degenerate (" +
                                std::to_string(total_redraws) + " redraws for " +
                                std::to_string(T) + " replicates)");
  }

  std::sort(distances.begin(), distances.end());
  ConfidenceRegion region;
  region.center = center;
  region.radius = distances[static_cast<std::size_t>(order_index(level, T) - 1)];
  region.level = level;
  region.replicates = T;
  region.redraws = total_redraws;
  return region;
}

bool contains(const ConfidenceRegion& region, const Vector& point) {
  if (point.size() != region.center.size()) {
    throw DimensionError("point dimension does not match the region");
  }
  return (point - region.center).norm() <= region.radius;
}

CoverageResult coverage_study(const SimDistribution& dist, int N, const Estimator& estimator,
                              const Vector& truth, double level, int T, int reps,
                              std::uint64_t base_seed, int threads) {
  if (reps < 1) throw InvalidDataError("need at least one repetition");
  std::vector<signed char> hit(static_cast<std::size_t>(reps), 0);
  std::vector<long> redraws(static_cast<std::size_t>(reps), 0);
  parallel_for(reps, threads, [&](std::int64_t r) {
    const Dataset data = sample(dist, N, base_seed + static_cast<std::uint64_t>(r));
    const ConfidenceRegion region =
        bootstrap_region(data, estimator, level, T,
                         derive_seed(base_seed ^ 0x636f7665ull, static_cast<std::uint64_t>(r)),
                         /*threads=*/1);
    hit[static_cast<std::size_t>(r)] = contains(region, truth) ? 1 : 0;
    redraws[static_cast<std::size_t>(r)] = region.redraws;
  });
  CoverageResult out;
  out.reps = reps;
  for (int r = 0; r < reps; ++r) {
    out.hits += hit[static_cast<std::size_t>(r)];
    out.redraws_total += redraws[static_cast<std::size_t>(r)];
  }
  out.coverage = static_cast<double>(out.hits) / static_cast<double>(reps);
  return out;
}

}  // namespace gqm
