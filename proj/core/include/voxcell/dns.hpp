#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "voxcell/homogenization.hpp"
#include "voxcell/lattice.hpp"
#include "voxcell/solver.hpp"
#include "voxcell/system.hpp"

namespace voxcell {

enum class GripMode {
  /// Penalty on the axial component of both end faces; lateral translations
  /// and the spin about the pull axis are removed by a rank-3 term. Ends
  /// contract freely.
  kAxial,
  /// Penalty on all components: clamped ends.
  kFull,
};

const char* to_string(GripMode g) noexcept;
GripMode parse_grip_mode(const std::string& s);

struct TensileSetup {
  int pull_axis = 2;
  double displacement_mm = 0.01;  ///< pull-face displacement delta
  /// Gage planes as fractions of the specimen length along the pull axis.
  double gage_begin = 0.25;
  double gage_end = 0.75;
  /// Cross-section area; the bounding box section when empty.
  std::optional<double> area_mm2;
  GripMode grips = GripMode::kAxial;
  double penalty_factor = 1e8;  ///< beta = factor * E / h_cell
  SolverConfig solver;

  void validate() const;
};

struct TensileResult {
  double E_star = 0.0;            ///< MPa
  double stress = 0.0;            ///< engineering stress reaction / A, MPa
  double gage_strain = 0.0;
  double reaction = 0.0;          ///< N, volume-consistent
  double penalty_reaction = 0.0;  ///< N, beta * int alpha (u_hat - u) on the pull face
  double area_mm2 = 0.0;
  double gage_length_mm = 0.0;
  std::size_t dofs = 0;
  SolverReport report;
  Eigen::VectorXd solution;
  std::vector<std::string> warnings;
};

TensileResult tensile_test(const FcmModel& model, const TensileSetup& setup);

/// Mean axial displacement over the material points of the plane at
/// coordinate s along axis. Falls back to all points when none is material.
double plane_mean_displacement(const FcmModel& model, const Eigen::VectorXd& u, int axis, double s);

struct Discretization {
  Int3 voxels_per_cell{4, 4, 4};
  int degree = 2;
};

struct ConvergenceRow {
  Discretization disc;
  std::size_t dofs = 0;
  std::optional<double> E_star;
  std::size_t iterations = 0;
  std::optional<double> rel_error;
  std::string error;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  std::optional<std::size_t> reference;  ///< row with the most DOFs
};

ConvergenceStudy convergence_study(const VoxelGrid& grid, const ElasticMaterial& material,
                                   const TensileSetup& setup,
                                   const std::vector<Discretization>& variants);

struct SweepResolution {
  double spacing_mm = 0.1;
  int supersample = 2;
  Discretization disc;
};

struct SweepRow {
  double increment_mm = 0.0;
  double d_horizontal_mm = 0.0;
  double d_inclined_mm = 0.0;
  double phi = 0.0;
  std::optional<double> E_star;  ///< axial modulus of the PBC tensor
  Eigen::Vector3d E_dir = Eigen::Vector3d::Zero();
  std::size_t dofs = 0;
  std::size_t iterations = 0;  ///< summed over load cases
  std::string error;
};

/// Both strut diameters grow by each increment; every point is voxelized
/// and homogenized under PBC.
std::vector<SweepRow> porosity_sweep(const OctetCellSpec& base, const std::vector<double>& increments_mm,
                                     const SweepResolution& resolution, const ElasticMaterial& material,
                                     int axis = 2, const SolverConfig& solver = {});

/// Piecewise-linear E*(phi) at phi, using the successful rows.
double interpolate_modulus(const std::vector<SweepRow>& rows, double phi);

}  // namespace voxcell
