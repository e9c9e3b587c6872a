#include "gqm/distributions.hpp"

#include <cmath>

namespace gqm {

const char* to_string(Characteristic c) {
  switch (c) {
    case Characteristic::dispersion: return "dispersion";
    case Characteristic::skewness: return "skewness";
    case Characteristic::kurtosis: return "kurtosis";
    case Characteristic::sphericity: return "sphericity";
  }
  return "?";
}

Characteristic characteristic_from_string(const std::string& name) {
  if (name == "dispersion") return Characteristic::dispersion;
  if (name == "skewness") return Characteristic::skewness;
  if (name == "kurtosis") return Characteristic::kurtosis;
  if (name == "sphericity") return Characteristic::sphericity;
  throw InvalidDataError("unknown characteristic '" + name + "'");
}

double skew_normal_draw(double rho, Rng& rng) {
  const double z0 = rng.normal();
  const double z1 = rng.normal();
  const double delta = rho / std::sqrt(1.0 + rho * rho);
  return delta * std::abs(z0) + std::sqrt(1.0 - delta * delta) * z1;
}

double student_t_draw(int dof, Rng& rng) {
  if (dof < 1) throw InvalidDataError("Student-t needs dof >= 1");
  const double z = rng.normal();
  double c;
  do {
    c = rng.chi_square(static_cast<double>(dof));
  } while (c <= 0.0);
  return z / std::sqrt(c / static_cast<double>(dof));
}

Dataset sample(const SimDistribution& dist, int N, std::uint64_t seed) {
  if (N < 1) throw InvalidDataError("sample size must be >= 1");
  if (dist.nu < 0 || dist.nu > 2) throw InvalidDataError("nu must be 0, 1 or 2");

  static constexpr double kDispersionScale[3] = {1.0, 2.0, 4.0};
  static constexpr double kShape[3] = {8.0, 2.0, 0.0};
  static constexpr int kDof[3] = {5, 7, 13};

  Rng rng(seed);
  Matrix points(N, 2);
  for (int i = 0; i < N; ++i) {
    double v1 = 0.0, v2 = 0.0;
    switch (dist.characteristic) {
      case Characteristic::dispersion:
        v1 = rng.normal() / 2.0;
        v2 = rng.normal() / kDispersionScale[dist.nu];
        break;
      case Characteristic::skewness:
        v1 = skew_normal_draw(kShape[dist.nu], rng);
        v2 = skew_normal_draw(kShape[dist.nu], rng) / 2.0;
        break;
      case Characteristic::kurtosis:
        v1 = student_t_draw(kDof[dist.nu], rng);
        v2 = student_t_draw(kDof[dist.nu], rng) / 2.0;
        break;
      case Characteristic::sphericity:
        v1 = skew_normal_draw(kShape[dist.nu], rng);
        v2 = skew_normal_draw(kShape[dist.nu], rng);
        break;
    }
    points(i, 0) = v1;
    points(i, 1) = v2;
  }
  return Dataset(std::move(points));
}

}  // namespace gqm
