#pragma once

#include <Eigen/Dense>

namespace voxcell {

using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

// Voigt order is (xx, yy, zz, yz, xz, xy) throughout. Strain vectors carry
// engineering shears (gamma = 2 eps_ij); stress vectors carry sigma_ij.

/// Isotropic linear elastic solid.
class ElasticMaterial {
 public:
  ElasticMaterial(double youngs_modulus_mpa, double poisson_ratio);

  double youngs_modulus() const noexcept { return E_; }
  double poisson_ratio() const noexcept { return nu_; }
  const Matrix6& stiffness() const noexcept { return C_; }

 private:
  double E_;
  double nu_;
  Matrix6 C_;
};

Matrix6 isotropic_stiffness(double youngs_modulus, double poisson_ratio);

Eigen::Matrix3d strain_tensor(const Vector6& voigt_strain);
Eigen::Matrix3d stress_tensor(const Vector6& voigt_stress);
Vector6 voigt_strain(const Eigen::Matrix3d& eps);
Vector6 voigt_stress(const Eigen::Matrix3d& sigma);

double von_mises(const Vector6& voigt_stress) noexcept;

/// Maps a Voigt stiffness through the rotation x' = R x.
Matrix6 rotate_stiffness(const Matrix6& C, const Eigen::Matrix3d& R);

}  // namespace voxcell
