#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "voxcell/material.hpp"
#include "voxcell/solver.hpp"
#include "voxcell/system.hpp"
#include "voxcell/voxel_model.hpp"

namespace voxcell {

enum class BcKind { kPbc, kKubc, kSubc };

const char* to_string(BcKind bc) noexcept;
BcKind parse_bc_kind(const std::string& s);

/// Periodic fluctuation space: DOFs of opposite faces share one reduced DOF,
/// the affine part eps * x sits on the vertex modes and the corner vertex is
/// pinned to it.
ConstrainedSpace constrain_pbc(const CellMesh& mesh, const Vector6& macro_strain);

/// Affine boundary displacement eps * x imposed strongly: every mode with a
/// boundary trace is eliminated.
ConstrainedSpace constrain_kubc(const CellMesh& mesh, const Vector6& macro_strain);

struct SubcOptions {
  /// Apply the traction only on material voxel faces. Off by default: the
  /// textbook static condition loads the whole box boundary.
  bool material_only = false;
};

/// Reduced operator and right-hand side of one load case.
struct ConstrainedProblem {
  std::shared_ptr<const ConstrainedSpace> space;  ///< null for SUBC (full space)
  FcmOperator op;
  Eigen::VectorXd rhs;

  Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const {
    return space ? space->expand(reduced) : reduced;
  }
};

/// Kinematic problem on a constrained space: T^T K T r = -T^T K u_p.
ConstrainedProblem make_constrained_problem(const FcmModel& model, ConstrainedSpace space);

/// Uniform traction sigma * n on the box faces. Rigid-body modes are removed
/// with a rank-6 term on the orthonormal rigid fields; the load is projected
/// onto their orthogonal complement.
ConstrainedProblem constrain_subc(const FcmModel& model, const Vector6& macro_stress,
                                  const SubcOptions& options = {});

/// (1/|Omega|) sum alpha C eps(u) over the box.
Vector6 average_stress(const FcmModel& model, const Eigen::VectorXd& u);
/// (1/|Omega|) integral of eps(u) over the box, void included.
Vector6 average_strain(const FcmModel& model, const Eigen::VectorXd& u);

/// |1/2 <sigma>.<eps> - W| / W with W the mean strain energy density.
/// Empty for a state without strain energy.
std::optional<double> hill_mandel_residual(const FcmModel& model, const Eigen::VectorXd& u);

struct HomogenizationOptions {
  SolverConfig solver;
  SubcOptions subc;
  std::string rve_id;
};

struct EffectiveTensor {
  Matrix6 C_star = Matrix6::Zero();
  BcKind bc = BcKind::kPbc;
  std::string rve_id;
  double asymmetry = 0.0;  ///< ||C - C^T|| / ||C|| before symmetrization
  std::array<SolverReport, 6> solver;
  std::array<std::optional<double>, 6> hill_mandel;
  std::size_t dofs = 0;  ///< unknowns per load case
};

/// Six unit load cases. Columns of C* are the mean stresses of the unit
/// strain cases (PBC, KUBC); for SUBC C* = <sigma> <eps>^-1 over the cases.
EffectiveTensor effective_tensor(const FcmModel& model, BcKind bc,
                                 const HomogenizationOptions& options = {});

/// E_i = 1 / S_ii with S = C^-1.
Eigen::Vector3d directional_modulus(const Matrix6& C_star);

struct OrderingReport {
  bool pass = false;
  double min_eig_kubc_pbc = 0.0;
  double min_eig_pbc_subc = 0.0;
  double norm_pbc = 0.0;
};

/// Checks C_kubc >= C_pbc >= C_subc in the PSD sense up to tol * ||C_pbc||_2.
OrderingReport bound_ordering_check(const Matrix6& C_kubc, const Matrix6& C_pbc,
                                    const Matrix6& C_subc, double tol);

struct EnsembleFailure {
  std::size_t index = 0;
  std::string message;
};

struct EnsembleStats {
  std::size_t n = 0;
  std::vector<EffectiveTensor> tensors;
  std::vector<Eigen::Vector3d> moduli;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Vector3d std_dev = Eigen::Vector3d::Zero();  ///< sample (n - 1)
  bool single_sample = false;  ///< n == 1: std_dev is 0 by convention
  std::vector<EnsembleFailure> failures;
};

struct EnsembleOptions {
  Int3 voxels_per_cell{4, 4, 4};
  int degree = 2;
  HomogenizationOptions homogenization;
};

/// Homogenizes every cell, collecting failures instead of aborting.
EnsembleStats ensemble_homogenize(const std::vector<VoxelGrid>& cells,
                                  const ElasticMaterial& material, BcKind bc,
                                  const EnsembleOptions& options = {});

/// Mean and sample standard deviation of per-cell moduli.
void summarize(EnsembleStats& stats);

}  // namespace voxcell
