#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <vector>

#include "voxcell/system.hpp"
#include "voxcell/voxel_model.hpp"

namespace voxcell {

/// Per-voxel cell data of a VTK export, voxel order x-fastest.
struct VoxelFields {
  std::vector<Eigen::Vector3d> displacement;
  std::vector<double> von_mises;
};

/// Displacement and von Mises stress at every voxel centre.
VoxelFields sample_voxel_fields(const FcmModel& model, const Eigen::VectorXd& u);

/// Legacy ASCII STRUCTURED_POINTS file with cell arrays alpha, displacement
/// and von_mises. Without fields the last two are written as zeros.
void export_vtk(const VoxelGrid& grid, const VoxelFields* fields, const std::filesystem::path& path);

}  // namespace voxcell
