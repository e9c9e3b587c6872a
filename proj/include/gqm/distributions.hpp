#pragma once

#include <cstdint>
#include <string>

#include "gqm/dataset.hpp"
#include "gqm/rng.hpp"

namespace gqm {

// The four simulation families. Each family comes in three variants
// nu = 0, 1, 2 along which the targeted trait weakens; the coordinates are
// always drawn independently.
//
//   dispersion: v1 ~ N(0,1)/2,        v2 ~ N(0,1)/s      s = 1, 2, 4
//   skewness:   v1 ~ SN(rho),         v2 ~ SN(rho)/2     rho = 8, 2, 0
//   kurtosis:   v1 ~ t(l),            v2 ~ t(l)/2        l = 5, 7, 13
//   sphericity: v1 ~ SN(rho),         v2 ~ SN(rho)       rho = 8, 2, 0
//
// SN(rho) is the standard skew-normal with shape rho; SN(0) = N(0,1), so
// sphericity nu = 2 is the standard bivariate normal.
enum class Characteristic { dispersion, skewness, kurtosis, sphericity };

const char* to_string(Characteristic c);
Characteristic characteristic_from_string(const std::string& name);

struct SimDistribution {
  Characteristic characteristic = Characteristic::dispersion;
  int nu = 0;  // 0, 1, 2
};

inline SimDistribution standard_bivariate_normal() {
  return {Characteristic::sphericity, 2};
}

// One standard skew-normal draw with shape rho:
// delta |z0| + sqrt(1 - delta^2) z1, delta = rho / sqrt(1 + rho^2),
// with z0, z1 consecutive normal deviates (two are consumed even for rho = 0).
double skew_normal_draw(double rho, Rng& rng);

// One Student-t draw with dof degrees of freedom: z / sqrt(chi2(dof)/dof).
double student_t_draw(int dof, Rng& rng);

// N observations of the given simulation distribution, drawn row by row
// (v1 then v2) from Rng(seed). Deterministic in (distribution, N, seed).
Dataset sample(const SimDistribution& dist, int N, std::uint64_t seed);

}  // namespace gqm
