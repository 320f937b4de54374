#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "voxcell/voxel_model.hpp"

namespace voxcell {

enum class Axis { kX = 0, kY = 1, kZ = 2 };

Axis parse_axis(const std::string& s);
const char* to_string(Axis a) noexcept;

/// Cubic octet-truss unit cell. Struts whose axis is perpendicular to the
/// build axis get d_horizontal, all others d_inclined.
struct OctetCellSpec {
  double cell_size_mm = 4.0;
  double d_horizontal_mm = 0.8;
  double d_inclined_mm = 0.4;
  Axis build_axis = Axis::kY;
};

struct Primitive {
  enum class Kind { kCapsule, kSphere, kBox };

  Kind kind = Kind::kCapsule;
  Real3 a{};  ///< capsule start, sphere center, box min corner
  Real3 b{};  ///< capsule end, box max corner
  double radius = 0.0;

  bool contains(const Real3& x) const noexcept;
  void bounds(Real3& lo, Real3& hi) const noexcept;
};

/// Union of primitives.
class ImplicitSolid {
 public:
  void add_capsule(const Real3& a, const Real3& b, double radius);
  void add_sphere(const Real3& center, double radius);
  void add_box(const Real3& lo, const Real3& hi);

  bool contains(const Real3& x) const noexcept;
  const std::vector<Primitive>& primitives() const noexcept { return primitives_; }

 private:
  std::vector<Primitive> primitives_;
};

/// Canonical 36-strut octet truss in [0, cell_size]^3: corner-to-face-centre
/// half diagonals on all six faces plus the twelve edges of the central
/// octahedron joining adjacent face centres. Struts are capsules.
ImplicitSolid octet_solid(const OctetCellSpec& spec);

/// Majority-vote voxelization: a voxel is material when at least half of its
/// k^3 equispaced sample points lie inside the solid.
VoxelGrid voxelize(const ImplicitSolid& solid, Int3 dims, Real3 spacing_mm, int supersample = 2,
                   double alpha_void = kDefaultAlphaVoid);

/// Periodic tiling of a cell grid.
VoxelGrid tile(const VoxelGrid& cell, Int3 reps,
               std::size_t max_voxels = std::size_t{1} << 31);

/// Synthetic as-manufactured perturbations. Surfaces whose outward normal
/// points against the build direction ("downskin") collect attached powder
/// blobs and are thickened by strut_oversize_mm.
struct DefectSpec {
  double powder_blob_density_per_mm2 = 0.0;
  double blob_radius_min_mm = 0.03;
  double blob_radius_max_mm = 0.06;
  double strut_oversize_mm = 0.0;
  std::uint64_t rng_seed = 0;
  Axis build_axis = Axis::kY;
};

/// Adds material only; never removes it. Output depends on the seed alone,
/// not on iteration order.
VoxelGrid apply_defects(const VoxelGrid& grid, const DefectSpec& spec);

/// Counter-based uniform variate in [0, 1) for (seed, counter, stream).
double counter_uniform(std::uint64_t seed, std::uint64_t counter, std::uint64_t stream) noexcept;

}  // namespace voxcell
