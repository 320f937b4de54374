#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "voxcell/voxel_model.hpp"

namespace voxcell {

enum class ModeKind { kVertex = 0, kEdge = 1, kFace = 2, kInterior = 3 };

/// Cartesian mesh of finite cells, each embedding a block of voxels, with a
/// tensor-product hierarchic basis of degree p and a C0-continuous global
/// DOF numbering.
///
/// Scalar modes are addressed by a "1D global position" per direction: in a
/// direction with m cells there are m*p + 1 positions; position c*p is the
/// vertex node at the start of cell c and c*p + j (1 <= j < p) is the j-th
/// internal mode of cell c. Global scalar ids list vertices, then edges,
/// then faces, then interiors, each x-fastest. DOF id = 3 * scalar id +
/// component.
class CellMesh {
 public:
  CellMesh(Int3 grid_dims, Real3 spacing_mm, Int3 voxels_per_cell, int degree);

  const Int3& cells() const noexcept { return cells_; }
  const Int3& voxels_per_cell() const noexcept { return vpc_; }
  const Real3& spacing() const noexcept { return spacing_; }
  int degree() const noexcept { return p_; }
  Real3 cell_size() const noexcept {
    return {vpc_[0] * spacing_[0], vpc_[1] * spacing_[1], vpc_[2] * spacing_[2]};
  }
  Real3 extent() const noexcept {
    const auto h = cell_size();
    return {cells_[0] * h[0], cells_[1] * h[1], cells_[2] * h[2]};
  }
  double volume() const noexcept {
    const auto e = extent();
    return e[0] * e[1] * e[2];
  }

  std::size_t cell_count() const noexcept {
    return static_cast<std::size_t>(cells_[0]) * cells_[1] * cells_[2];
  }
  int voxels_in_cell() const noexcept { return vpc_[0] * vpc_[1] * vpc_[2]; }
  int modes_per_cell() const noexcept { return (p_ + 1) * (p_ + 1) * (p_ + 1); }
  int dofs_per_cell() const noexcept { return 3 * modes_per_cell(); }
  std::size_t scalar_mode_count() const noexcept { return position_of_id_.size(); }
  std::size_t dof_count() const noexcept { return 3 * scalar_mode_count(); }

  /// Number of 1D global positions per direction (m*p + 1).
  const Int3& positions() const noexcept { return npos_; }

  std::size_t cell_index(int cx, int cy, int cz) const noexcept {
    return static_cast<std::size_t>(cx) +
           static_cast<std::size_t>(cells_[0]) *
               (static_cast<std::size_t>(cy) + static_cast<std::size_t>(cells_[1]) * cz);
  }
  Int3 cell_coords(std::size_t c) const noexcept {
    return {static_cast<int>(c % cells_[0]), static_cast<int>((c / cells_[0]) % cells_[1]),
            static_cast<int>(c / (static_cast<std::size_t>(cells_[0]) * cells_[1]))};
  }

  /// Local scalar mode index of the tensor-product mode (a, b, c).
  int local_mode(int a, int b, int c) const noexcept { return a + (p_ + 1) * (b + (p_ + 1) * c); }

  /// 1D global position of local 1D mode a in cell c.
  int position_1d(int cell, int a) const noexcept {
    return a == 0 ? cell * p_ : (a == 1 ? (cell + 1) * p_ : cell * p_ + a - 1);
  }

  std::int32_t scalar_id(const Int3& pos) const noexcept {
    return id_of_position_[linear_position(pos)];
  }
  Int3 position_of(std::int32_t scalar_id) const noexcept;

  ModeKind kind(const Int3& pos) const noexcept;
  bool is_vertex_position(int /*d*/, int g) const noexcept { return g % p_ == 0; }
  /// True when the mode has a non-zero trace on the outer boundary.
  bool on_boundary(const Int3& pos) const noexcept;
  /// Physical coordinate of a vertex position (g must be a multiple of p).
  double vertex_coordinate(int d, int g) const noexcept { return (g / p_) * cell_size()[d]; }

  /// Global DOF ids of a cell, ordered 3 * local_mode + component.
  std::span<const std::int32_t> cell_dofs(std::size_t c) const noexcept {
    return {cell_dofs_.data() + c * dofs_per_cell(), static_cast<std::size_t>(dofs_per_cell())};
  }

  /// Global voxel index of local voxel (i, j, k) of cell c.
  std::size_t voxel_index(std::size_t c, int i, int j, int k) const noexcept;
  int local_voxel(int i, int j, int k) const noexcept { return i + vpc_[0] * (j + vpc_[1] * k); }

  const Int3& grid_dims() const noexcept { return grid_dims_; }

 private:
  std::size_t linear_position(const Int3& g) const noexcept {
    return static_cast<std::size_t>(g[0]) +
           static_cast<std::size_t>(npos_[0]) *
               (static_cast<std::size_t>(g[1]) + static_cast<std::size_t>(npos_[1]) * g[2]);
  }

  Int3 grid_dims_;
  Real3 spacing_;
  Int3 vpc_;
  int p_;
  Int3 cells_;
  Int3 npos_;
  std::vector<std::int32_t> id_of_position_;
  std::vector<std::int64_t> position_of_id_;
  std::vector<std::int32_t> cell_dofs_;
};

}  // namespace voxcell
