#include "voxcell/material.hpp"

#include <cmath>

#include "voxcell/error.hpp"

namespace voxcell {
namespace {

constexpr int kPairs[6][2] = {{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}};

}  // namespace

Matrix6 isotropic_stiffness(double E, double nu) {
  const double lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  const double mu = E / (2.0 * (1.0 + nu));
  Matrix6 C = Matrix6::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) C(i, j) = lambda;
    C(i, i) = lambda + 2.0 * mu;
    C(i + 3, i + 3) = mu;
  }
  return C;
}

ElasticMaterial::ElasticMaterial(double E, double nu) : E_(E), nu_(nu) {
  if (!(E > 0.0) || !std::isfinite(E)) throw Error("Young's modulus must be positive");
  if (!(nu > -1.0 && nu < 0.5)) throw Error("Poisson ratio must lie in (-1, 0.5)");
  C_ = isotropic_stiffness(E, nu);
}

Eigen::Matrix3d strain_tensor(const Vector6& v) {
  Eigen::Matrix3d e;
  for (int k = 0; k < 6; ++k) {
    const auto [i, j] = kPairs[k];
    const double value = k < 3 ? v[k] : 0.5 * v[k];
    e(i, j) = value;
    e(j, i) = value;
  }
  return e;
}

Eigen::Matrix3d stress_tensor(const Vector6& v) {
  Eigen::Matrix3d s;
  for (int k = 0; k < 6; ++k) {
    const auto [i, j] = kPairs[k];
    s(i, j) = v[k];
    s(j, i) = v[k];
  }
  return s;
}

Vector6 voigt_strain(const Eigen::Matrix3d& e) {
  Vector6 v;
  for (int k = 0; k < 6; ++k) {
    const auto [i, j] = kPairs[k];
    v[k] = k < 3 ? e(i, i) : e(i, j) + e(j, i);
  }
  return v;
}

Vector6 voigt_stress(const Eigen::Matrix3d& s) {
  Vector6 v;
  for (int k = 0; k < 6; ++k) {
    const auto [i, j] = kPairs[k];
    v[k] = 0.5 * (s(i, j) + s(j, i));
  }
  return v;
}

double von_mises(const Vector6& s) noexcept {
  const double d01 = s[0] - s[1], d12 = s[1] - s[2], d20 = s[2] - s[0];
  return std::sqrt(0.5 * (d01 * d01 + d12 * d12 + d20 * d20) +
                   3.0 * (s[3] * s[3] + s[4] * s[4] + s[5] * s[5]));
}

Matrix6 rotate_stiffness(const Matrix6& C, const Eigen::Matrix3d& R) {
  // sigma' = R sigma R^T and eps' = R eps R^T; build the Voigt maps column by column.
  Matrix6 Tstress, Tstrain;
  for (int k = 0; k < 6; ++k) {
    Vector6 unit = Vector6::Zero();
    unit[k] = 1.0;
    Tstress.col(k) = voigt_stress(R * stress_tensor(unit) * R.transpose());
    Tstrain.col(k) = voigt_strain(R * strain_tensor(unit) * R.transpose());
  }
  return Tstress * C * Tstrain.inverse();
}

}  // namespace voxcell
