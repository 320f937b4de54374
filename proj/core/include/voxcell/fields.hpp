#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "voxcell/material.hpp"
#include "voxcell/system.hpp"

namespace voxcell {

struct FieldSample {
  Eigen::Vector3d displacement = Eigen::Vector3d::Zero();
  Vector6 strain = Vector6::Zero();  ///< Voigt, engineering shear
  Vector6 stress = Vector6::Zero();  ///< alpha * C * strain of the containing voxel
  double alpha = 1.0;
};

/// Fields of the full-space solution u at point x (mm). Points on interior
/// cell or voxel faces are attributed to the upper neighbour.
FieldSample evaluate_point(const FcmModel& model, const Eigen::VectorXd& u, const Eigen::Vector3d& x);

std::vector<FieldSample> evaluate_fields(const FcmModel& model, const Eigen::VectorXd& u,
                                         std::span<const Eigen::Vector3d> points);

/// Fields at every voxel centre, in voxel order.
std::vector<FieldSample> sample_voxel_centres(const FcmModel& model, const Eigen::VectorXd& u);

}  // namespace voxcell
