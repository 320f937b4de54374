#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace voxcell {

using Int3 = std::array<int, 3>;
using Real3 = std::array<double, 3>;

/// Indicator value assigned to void voxels unless configured otherwise.
inline constexpr double kDefaultAlphaVoid = 1e-11;

/// Scalar image as read from a CT scan. Values are stored x-fastest.
class GrayscaleVolume {
 public:
  GrayscaleVolume(Int3 dims, Real3 spacing_mm);
  GrayscaleVolume(Int3 dims, Real3 spacing_mm, std::vector<float> values);

  const Int3& dims() const noexcept { return dims_; }
  const Real3& spacing() const noexcept { return spacing_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::size_t index(int i, int j, int k) const noexcept {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims_[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_[1]) * k);
  }

  float operator[](std::size_t n) const noexcept { return values_[n]; }
  float& operator[](std::size_t n) noexcept { return values_[n]; }
  float at(int i, int j, int k) const noexcept { return values_[index(i, j, k)]; }

  std::span<const float> values() const noexcept { return values_; }

 private:
  Int3 dims_;
  Real3 spacing_;
  std::vector<float> values_;
};

/// Binary material/void geometry on a regular grid. The indicator of a voxel
/// is 1 for material and alpha_void for void; no other values are possible.
class VoxelGrid {
 public:
  /// All-void grid.
  VoxelGrid(Int3 dims, Real3 spacing_mm, double alpha_void = kDefaultAlphaVoid);

  static VoxelGrid solid(Int3 dims, Real3 spacing_mm, double alpha_void = kDefaultAlphaVoid);

  const Int3& dims() const noexcept { return dims_; }
  const Real3& spacing() const noexcept { return spacing_; }
  double alpha_void() const noexcept { return alpha_void_; }
  std::size_t size() const noexcept { return material_.size(); }
  Real3 extent() const noexcept {
    return {dims_[0] * spacing_[0], dims_[1] * spacing_[1], dims_[2] * spacing_[2]};
  }
  double voxel_volume() const noexcept { return spacing_[0] * spacing_[1] * spacing_[2]; }

  std::size_t index(int i, int j, int k) const noexcept {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims_[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_[1]) * k);
  }
  bool contains(int i, int j, int k) const noexcept {
    return i >= 0 && j >= 0 && k >= 0 && i < dims_[0] && j < dims_[1] && k < dims_[2];
  }

  bool is_material(std::size_t n) const noexcept { return material_[n] != 0; }
  bool is_material(int i, int j, int k) const noexcept { return material_[index(i, j, k)] != 0; }
  void set_material(std::size_t n, bool m) noexcept { material_[n] = m ? 1 : 0; }
  void set_material(int i, int j, int k, bool m) noexcept { set_material(index(i, j, k), m); }

  double alpha(std::size_t n) const noexcept { return material_[n] ? 1.0 : alpha_void_; }
  double alpha(int i, int j, int k) const noexcept { return alpha(index(i, j, k)); }

  std::size_t material_count() const noexcept;
  std::span<const std::uint8_t> mask() const noexcept { return material_; }

  friend bool operator==(const VoxelGrid& a, const VoxelGrid& b) noexcept;

 private:
  Int3 dims_;
  Real3 spacing_;
  double alpha_void_;
  std::vector<std::uint8_t> material_;
};

enum class ScalarType { kU8, kU16, kF32 };
enum class Endianness { kLittle, kBig };

/// Contents of the JSON sidecar that accompanies every RAW payload.
struct RawDescriptor {
  Int3 dims{1, 1, 1};
  Real3 spacing_mm{1.0, 1.0, 1.0};
  ScalarType dtype = ScalarType::kU8;
  Endianness endianness = Endianness::kLittle;
};

std::size_t scalar_size(ScalarType t) noexcept;
const char* to_string(ScalarType t) noexcept;
ScalarType parse_scalar_type(const std::string& s);

/// The RAW payload belonging to a sidecar: "x.raw.json" -> "x.raw".
std::filesystem::path raw_path_for(const std::filesystem::path& sidecar);

RawDescriptor read_descriptor(const std::filesystem::path& sidecar);
void write_descriptor(const RawDescriptor& d, const std::filesystem::path& sidecar);

GrayscaleVolume load_raw_volume(const std::filesystem::path& raw, const RawDescriptor& meta);
/// Loads a volume given the path of its sidecar.
GrayscaleVolume load_raw_volume(const std::filesystem::path& sidecar);

void save_raw_volume(const GrayscaleVolume& vol, const std::filesystem::path& sidecar,
                     ScalarType dtype, Endianness endianness = Endianness::kLittle);

/// Writes a grid as a u8 mask (1 = material, 0 = void).
void save_voxel_grid(const VoxelGrid& grid, const std::filesystem::path& sidecar);

struct SegmentationConfig {
  double threshold = 14500.0;
  bool inclusive = true;  ///< value >= threshold is material; otherwise value > threshold
};

VoxelGrid threshold_segment(const GrayscaleVolume& vol, const SegmentationConfig& cfg,
                            double alpha_void = kDefaultAlphaVoid);

/// Renders a grid as grayscale: void -> low, material -> high.
GrayscaleVolume to_grayscale(const VoxelGrid& grid, float low, float high);

/// Void volume fraction, 1 - material voxels / all voxels.
double porosity(const VoxelGrid& grid) noexcept;

/// Copy of the box [origin, origin + dims) of a grid.
VoxelGrid subvolume(const VoxelGrid& grid, Int3 origin, Int3 dims);

/// First n whole cells of size cell_voxels, in x-fastest order of cell index.
std::vector<VoxelGrid> extract_unit_cells(const VoxelGrid& grid, Int3 cell_voxels, int n);

}  // namespace voxcell
