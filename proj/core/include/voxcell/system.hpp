#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "voxcell/kernels.hpp"
#include "voxcell/material.hpp"
#include "voxcell/mesh.hpp"
#include "voxcell/voxel_model.hpp"

namespace voxcell {

/// Cell matrices deduplicated by indicator pattern. Cells with the same
/// voxel pattern (fully solid, fully void, tiled repeats) share storage.
struct CellPatterns {
  std::vector<Eigen::MatrixXd> stiffness;     ///< sum_v alpha_v K_v
  std::vector<StrainOperator> stress_integral;  ///< C sum_v alpha_v G_v
  std::vector<Eigen::VectorXd> load_integral;   ///< sum_v alpha_v int N
  std::vector<std::int32_t> cell_pattern;       ///< pattern id per cell
  StrainOperator strain_integral;               ///< sum_v G_v, identical for all cells
};

/// A voxel grid discretized by finite cells.
class FcmModel {
 public:
  FcmModel(VoxelGrid grid, Int3 voxels_per_cell, int degree, const ElasticMaterial& material);
  /// Reuses a kernel table built for the same mesh parameters and material.
  FcmModel(VoxelGrid grid, Int3 voxels_per_cell, int degree, const ElasticMaterial& material,
           std::shared_ptr<const VoxelKernelTable> kernels);

  const VoxelGrid& grid() const noexcept { return grid_; }
  const CellMesh& mesh() const noexcept { return mesh_; }
  const ElasticMaterial& material() const noexcept { return material_; }
  const VoxelKernelTable& kernels() const noexcept { return *kernels_; }
  std::shared_ptr<const VoxelKernelTable> shared_kernels() const noexcept { return kernels_; }
  const CellPatterns& patterns() const noexcept { return *patterns_; }
  std::shared_ptr<const CellPatterns> shared_patterns() const noexcept { return patterns_; }

  /// Indicator values of the voxels of cell c, in local voxel order.
  std::vector<double> cell_alphas(std::size_t c) const;

 private:
  VoxelGrid grid_;
  CellMesh mesh_;
  ElasticMaterial material_;
  std::shared_ptr<const VoxelKernelTable> kernels_;
  std::shared_ptr<const CellPatterns> patterns_;
};

std::shared_ptr<const CellPatterns> build_cell_patterns(const CellMesh& mesh, const VoxelGrid& grid,
                                                        const VoxelKernelTable& kernels);

/// Affine-constrained subspace u = particular + T r, where T maps each full
/// DOF to one reduced DOF (or to none, -1, in which case the DOF keeps its
/// particular value).
struct ConstrainedSpace {
  std::vector<std::int32_t> reduced_of_full;
  std::int32_t reduced_size = 0;
  Eigen::VectorXd particular;

  Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const;
  /// T^T f.
  Eigen::VectorXd restrict(const Eigen::VectorXd& full) const;
};

class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t size() const = 0;
  virtual void apply(std::span<const double> x, std::span<double> y) const = 0;
  virtual Eigen::VectorXd diagonal() const = 0;

  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
};

class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(Eigen::MatrixXd A) : A_(std::move(A)) {}
  std::size_t size() const override { return static_cast<std::size_t>(A_.rows()); }
  void apply(std::span<const double> x, std::span<double> y) const override;
  Eigen::VectorXd diagonal() const override { return A_.diagonal(); }

 private:
  Eigen::MatrixXd A_;
};

/// Scalar face matrix applied to selected displacement components of a cell.
struct BoundaryBlock {
  std::int32_t cell = 0;
  Eigen::MatrixXd matrix;  ///< modes_per_cell x modes_per_cell
  std::array<bool, 3> components{true, true, true};
};

/// Global stiffness operator applied cell by cell. Optionally restricted to a
/// constrained space (T^T K T); optionally augmented with boundary blocks and
/// a low-rank term weight * R R^T.
class FcmOperator final : public LinearOperator {
 public:
  FcmOperator(const CellMesh& mesh, std::shared_ptr<const CellPatterns> patterns,
              const ConstrainedSpace* space = nullptr);

  std::size_t size() const override { return n_; }
  void apply(std::span<const double> x, std::span<double> y) const override;
  Eigen::VectorXd diagonal() const override;

  void add_boundary_block(BoundaryBlock block);
  void set_low_rank(Eigen::MatrixXd basis, double weight);

  /// Explicit sparse matrix of the same operator.
  Eigen::SparseMatrix<double> to_sparse() const;

  std::span<const std::int32_t> cell_gather(std::size_t c) const noexcept {
    return {gather_.data() + c * ndof_cell_, static_cast<std::size_t>(ndof_cell_)};
  }

 private:
  std::size_t n_;
  int ndof_cell_;
  std::size_t ncells_;
  std::shared_ptr<const CellPatterns> patterns_;
  std::vector<std::int32_t> gather_;
  /// Runs of cells sharing one pattern, applied as a single matrix product.
  struct Batch {
    std::int32_t pattern;
    std::uint32_t begin;  ///< offset into batch_cells_
    std::uint32_t count;
  };
  std::vector<Batch> batches_;
  std::vector<std::int32_t> batch_cells_;
  std::vector<BoundaryBlock> blocks_;
  Eigen::MatrixXd low_rank_;
  double low_rank_weight_ = 0.0;
};

struct BoxFace {
  int axis = 0;
  bool upper = false;
};

/// Penalty enforcement of u = prescribed(x) on box faces.
struct PenaltyFace {
  BoxFace face;
  std::function<Eigen::Vector3d(const Eigen::Vector3d&)> prescribed;
  std::array<bool, 3> components{true, true, true};
};

struct PenaltyConfig {
  double beta = 0.0;  ///< penalty magnitude [MPa/mm]
  std::vector<PenaltyFace> faces;
  /// Weight the penalty integrand by the voxel indicator, so that only the
  /// physical part of the face is constrained.
  bool alpha_weighted = true;

  /// factor * E / h_cell, with h_cell the smallest cell edge.
  static double default_beta(const FcmModel& model, double factor = 1e8);
};

struct TractionLoad {
  BoxFace face;
  Eigen::Vector3d traction = Eigen::Vector3d::Zero();
  bool alpha_weighted = false;
};

struct LoadSpec {
  Eigen::Vector3d body_force = Eigen::Vector3d::Zero();
  std::vector<TractionLoad> tractions;
};

struct AssembledSystem {
  FcmOperator op;
  Eigen::VectorXd rhs;
  std::vector<std::string> warnings;
};

/// Full system for the penalty-constrained boundary value problem.
AssembledSystem assemble_system(const FcmModel& model, const PenaltyConfig& penalty,
                                const LoadSpec& loads);

/// Adds penalty blocks to op and the matching penalty load to rhs (full space).
void add_penalty(const FcmModel& model, const PenaltyConfig& penalty, FcmOperator& op,
                 Eigen::VectorXd& rhs);

/// Consistent nodal loads of loads (full space).
Eigen::VectorXd load_vector(const FcmModel& model, const LoadSpec& loads);

/// Visits every face quadrature point: fn(cell, global voxel, weight, x, N).
void for_each_face_point(
    const FcmModel& model, const BoxFace& face,
    const std::function<void(std::size_t, std::size_t, double, const Eigen::Vector3d&,
                             const Eigen::VectorXd&)>& fn);

/// Orthonormal rigid-body displacement fields. modes lists translations
/// 0..2 (x, y, z) and rotations 3..5 about the x, y, z axes through the box
/// centre.
Eigen::MatrixXd rigid_body_modes(const CellMesh& mesh, std::span<const int> modes);

/// Weight for a low-rank term with orthonormal basis R such that its
/// directions have unit Rayleigh quotient under Jacobi scaling by diag.
double balanced_low_rank_weight(const Eigen::VectorXd& diag, const Eigen::MatrixXd& R);

/// Vertex-mode interpolant of the affine field u = eps * x (exact).
Eigen::VectorXd affine_field(const CellMesh& mesh, const Vector6& voigt_strain);

/// 1/2 u^T K u over the volume terms only (no penalty or low-rank terms).
double strain_energy(const FcmModel& model, const Eigen::VectorXd& u);

}  // namespace voxcell
