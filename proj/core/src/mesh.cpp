#include "voxcell/mesh.hpp"

#include <limits>

#include "voxcell/error.hpp"

namespace voxcell {

CellMesh::CellMesh(Int3 grid_dims, Real3 spacing_mm, Int3 voxels_per_cell, int degree)
    : grid_dims_(grid_dims), spacing_(spacing_mm), vpc_(voxels_per_cell), p_(degree) {
  if (degree < 1) throw Error("polynomial degree must be >= 1");
  std::size_t total = 1;
  for (int d = 0; d < 3; ++d) {
    if (vpc_[d] < 1) throw Error("voxels per cell must be >= 1");
    if (grid_dims[d] % vpc_[d] != 0) {
      throw Error("grid dimension " + std::to_string(grid_dims[d]) +
                  " is not a multiple of voxels per cell " + std::to_string(vpc_[d]));
    }
    cells_[d] = grid_dims[d] / vpc_[d];
    npos_[d] = cells_[d] * p_ + 1;
    total *= static_cast<std::size_t>(npos_[d]);
  }
  if (3 * total > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw Error("mesh too large for 32-bit DOF ids");
  }

  // Number by kind, x-fastest within each kind.
  id_of_position_.assign(total, -1);
  position_of_id_.reserve(total);
  for (int kind = 0; kind < 4; ++kind) {
    for (int gz = 0; gz < npos_[2]; ++gz) {
      for (int gy = 0; gy < npos_[1]; ++gy) {
        for (int gx = 0; gx < npos_[0]; ++gx) {
          const Int3 g{gx, gy, gz};
          if (static_cast<int>(this->kind(g)) != kind) continue;
          const auto lin = linear_position(g);
          id_of_position_[lin] = static_cast<std::int32_t>(position_of_id_.size());
          position_of_id_.push_back(static_cast<std::int64_t>(lin));
        }
      }
    }
  }

  const int nm = modes_per_cell();
  cell_dofs_.resize(cell_count() * 3 * nm);
  for (std::size_t c = 0; c < cell_count(); ++c) {
    const Int3 cc = cell_coords(c);
    std::int32_t* out = cell_dofs_.data() + c * 3 * nm;
    for (int k = 0; k <= p_; ++k) {
      for (int j = 0; j <= p_; ++j) {
        for (int i = 0; i <= p_; ++i) {
          const Int3 g{position_1d(cc[0], i), position_1d(cc[1], j), position_1d(cc[2], k)};
          const std::int32_t s = scalar_id(g);
          const int l = local_mode(i, j, k);
          for (int comp = 0; comp < 3; ++comp) out[3 * l + comp] = 3 * s + comp;
        }
      }
    }
  }
}

Int3 CellMesh::position_of(std::int32_t scalar_id) const noexcept {
  const auto lin = static_cast<std::size_t>(position_of_id_[scalar_id]);
  return {static_cast<int>(lin % npos_[0]), static_cast<int>((lin / npos_[0]) % npos_[1]),
          static_cast<int>(lin / (static_cast<std::size_t>(npos_[0]) * npos_[1]))};
}

ModeKind CellMesh::kind(const Int3& g) const noexcept {
  int internal = 0;
  for (int d = 0; d < 3; ++d) internal += (g[d] % p_ != 0) ? 1 : 0;
  return static_cast<ModeKind>(internal);
}

bool CellMesh::on_boundary(const Int3& g) const noexcept {
  for (int d = 0; d < 3; ++d) {
    if (g[d] == 0 || g[d] == npos_[d] - 1) return true;
  }
  return false;
}

std::size_t CellMesh::voxel_index(std::size_t c, int i, int j, int k) const noexcept {
  const Int3 cc = cell_coords(c);
  const std::size_t gi = static_cast<std::size_t>(cc[0]) * vpc_[0] + i;
  const std::size_t gj = static_cast<std::size_t>(cc[1]) * vpc_[1] + j;
  const std::size_t gk = static_cast<std::size_t>(cc[2]) * vpc_[2] + k;
  return gi + static_cast<std::size_t>(grid_dims_[0]) * (gj + static_cast<std::size_t>(grid_dims_[1]) * gk);
}

}  // namespace voxcell
