#pragma once

#include <cstdint>
#include <functional>

#include "gqm/dataset.hpp"
#include "gqm/distributions.hpp"

namespace gqm {

// Closed ball {x : ||x - center|| <= radius} used as a pivotal bootstrap
// confidence region. Scalar statistics are the 1-dimensional case
// (an interval around the estimate).
struct ConfidenceRegion {
  Vector center;
  double radius = 0.0;
  double level = 0.0;  // nominal confidence, in (0,1)
  int replicates = 0;  // T
  long redraws = 0;    // resamples replaced after estimator failures
};

// Statistic to bootstrap; must return the same dimension for every input.
using Estimator = std::function<Vector(const Dataset&)>;

// Pivotal bootstrap ball for estimator(data):
//   center = estimator(data)
//   radius = the ceil(level * T)-th smallest of ||estimator(resample_t) - center||
// over T row resamples (with replacement, N rows each). Replicate t draws
// its indices from Rng(derive_seed(seed, t)); a resample on which the
// estimator fails with a degeneracy error (collinear, degenerate, singular,
// nonconvergence) is redrawn from the same stream and counted. More than
// 10% redraws in total aborts with BootstrapFailureError. An estimator
// failure on the original data propagates unchanged.
ConfidenceRegion bootstrap_region(const Dataset& data, const Estimator& estimator,
                                  double level, int T, std::uint64_t seed,
                                  int threads = 1);

bool contains(const ConfidenceRegion& region, const Vector& point);

// Empirical coverage of a fixed point under repeated sampling: reps
// datasets of size N from dist (rep r uses data seed base_seed + r and
// bootstrap seed derive_seed(base_seed ^ 0x636f7665, r)), a bootstrap ball
// per dataset, and the fraction of balls containing truth.
struct CoverageResult {
  int reps = 0;
  int hits = 0;
  double coverage = 0.0;
  long redraws_total = 0;
};

CoverageResult coverage_study(const SimDistribution& dist, int N, const Estimator& estimator,
                              const Vector& truth, double level, int T, int reps,
                              std::uint64_t base_seed, int threads = 1);

}  // namespace gqm
