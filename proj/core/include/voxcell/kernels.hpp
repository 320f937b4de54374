#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "voxcell/material.hpp"
#include "voxcell/mesh.hpp"

namespace voxcell {

using StrainOperator = Eigen::Matrix<double, 6, Eigen::Dynamic>;

/// Per-voxel integrals over the reference cell with unit indicator,
/// computed once per (degree, voxels per cell, spacing, material) and shared
/// by every cell of the mesh. Each voxel is integrated with (p+1)^3 Gauss
/// points, which is exact for the polynomial integrands.
class VoxelKernelTable {
 public:
  VoxelKernelTable(const CellMesh& mesh, const ElasticMaterial& material);

  int voxel_count() const noexcept { return static_cast<int>(stiffness_.size()); }
  int dofs_per_cell() const noexcept { return ndof_; }

  /// K_v = int_voxel B^T C B dV.
  const Eigen::MatrixXd& stiffness(int v) const noexcept { return stiffness_[v]; }
  /// G_v = int_voxel B dV; maps cell DOFs to the integrated Voigt strain.
  const StrainOperator& strain_integral(int v) const noexcept { return strain_[v]; }
  /// int_voxel N_a dV for each scalar mode.
  const Eigen::VectorXd& shape_integral(int v) const noexcept { return shape_[v]; }

  Eigen::MatrixXd solid_stiffness() const;
  const Matrix6& material_stiffness() const noexcept { return C_; }

 private:
  int ndof_;
  Matrix6 C_;
  std::vector<Eigen::MatrixXd> stiffness_;
  std::vector<StrainOperator> strain_;
  std::vector<Eigen::VectorXd> shape_;
};

/// K_cell = sum_v alpha_v K_v.
Eigen::MatrixXd cell_stiffness(const VoxelKernelTable& table, std::span<const double> alphas);

/// Fills the strain-displacement matrix B (6 x 3n) from physical gradients
/// of the n scalar modes, stored as a 3 x n matrix.
void fill_strain_operator(const Eigen::Ref<const Eigen::Matrix3Xd>& gradients, StrainOperator& B);

}  // namespace voxcell
