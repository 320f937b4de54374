#include "voxcell/voxel_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <type_traits>
#include <nlohmann/json.hpp>
#include <numeric>

#include "voxcell/error.hpp"

namespace voxcell {
namespace fs = std::filesystem;

namespace {

std::size_t voxel_count(const Int3& dims) {
  if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1) {
    throw Error("voxel dims must all be >= 1");
  }
  return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
}

void check_spacing(const Real3& s) {
  for (double v : s) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error("voxel spacing must be positive");
  }
}

template <typename T>
T byteswap_value(T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  std::reverse(b, b + sizeof(T));
  std::memcpy(&v, b, sizeof(T));
  return v;
}

bool host_matches(Endianness e) {
  return (e == Endianness::kLittle) == (std::endian::native == std::endian::little);
}

template <typename T>
void decode(const std::vector<char>& bytes, Endianness e, std::vector<float>& out) {
  const bool swap = !host_matches(e);
  for (std::size_t n = 0; n < out.size(); ++n) {
    T v;
    std::memcpy(&v, bytes.data() + n * sizeof(T), sizeof(T));
    if (swap) v = byteswap_value(v);
    out[n] = static_cast<float>(v);
  }
}

template <typename T>
void encode(std::span<const float> values, Endianness e, std::vector<char>& bytes) {
  const bool swap = !host_matches(e);
  bytes.resize(values.size() * sizeof(T));
  for (std::size_t n = 0; n < values.size(); ++n) {
    T v;
    if constexpr (std::is_integral_v<T>) {
      const double clamped =
          std::clamp<double>(std::round(values[n]), 0.0, std::numeric_limits<T>::max());
      v = static_cast<T>(clamped);
    } else {
      v = static_cast<T>(values[n]);
    }
    if (swap) v = byteswap_value(v);
    std::memcpy(bytes.data() + n * sizeof(T), &v, sizeof(T));
  }
}

}  // namespace

GrayscaleVolume::GrayscaleVolume(Int3 dims, Real3 spacing_mm)
    : dims_(dims), spacing_(spacing_mm), values_(voxel_count(dims), 0.0f) {
  check_spacing(spacing_);
}

GrayscaleVolume::GrayscaleVolume(Int3 dims, Real3 spacing_mm, std::vector<float> values)
    : dims_(dims), spacing_(spacing_mm), values_(std::move(values)) {
  check_spacing(spacing_);
  if (values_.size() != voxel_count(dims_)) {
    throw SizeMismatchError(voxel_count(dims_), values_.size());
  }
}

VoxelGrid::VoxelGrid(Int3 dims, Real3 spacing_mm, double alpha_void)
    : dims_(dims), spacing_(spacing_mm), alpha_void_(alpha_void), material_(voxel_count(dims), 0) {
  check_spacing(spacing_);
  if (!(alpha_void > 0.0) || !(alpha_void < 1.0)) {
    throw Error("alpha_void must lie in (0, 1)");
  }
}

VoxelGrid VoxelGrid::solid(Int3 dims, Real3 spacing_mm, double alpha_void) {
  VoxelGrid g(dims, spacing_mm, alpha_void);
  std::fill(g.material_.begin(), g.material_.end(), std::uint8_t{1});
  return g;
}

std::size_t VoxelGrid::material_count() const noexcept {
  return static_cast<std::size_t>(std::count(material_.begin(), material_.end(), std::uint8_t{1}));
}

bool operator==(const VoxelGrid& a, const VoxelGrid& b) noexcept {
  return a.dims_ == b.dims_ && a.spacing_ == b.spacing_ && a.alpha_void_ == b.alpha_void_ &&
         a.material_ == b.material_;
}

std::size_t scalar_size(ScalarType t) noexcept {
  switch (t) {
    case ScalarType::kU8: return 1;
    case ScalarType::kU16: return 2;
    case ScalarType::kF32: return 4;
  }
  return 0;
}

const char* to_string(ScalarType t) noexcept {
  switch (t) {
    case ScalarType::kU8: return "u8";
    case ScalarType::kU16: return "u16";
    case ScalarType::kF32: return "f32";
  }
  return "?";
}

ScalarType parse_scalar_type(const std::string& s) {
  if (s == "u8") return ScalarType::kU8;
  if (s == "u16") return ScalarType::kU16;
  if (s == "f32") return ScalarType::kF32;
  throw Error("unknown scalar type '" + s + "'");
}

fs::path raw_path_for(const fs::path& sidecar) {
  if (sidecar.extension() != ".json") {
    throw Error("voxel sidecar must have a .json extension: " + sidecar.string());
  }
  fs::path raw = sidecar;
  raw.replace_extension();
  return raw;
}

RawDescriptor read_descriptor(const fs::path& sidecar) {
  std::ifstream in(sidecar);
  if (!in) throw Error("cannot open " + sidecar.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed sidecar " + sidecar.string() + ": " + e.what());
  }
  static const std::array<const char*, 4> kKeys{"dims", "spacing_mm", "dtype", "endianness"};
  for (const auto& [key, _] : j.items()) {
    if (std::find_if(kKeys.begin(), kKeys.end(), [&](const char* k) { return key == k; }) ==
        kKeys.end()) {
      throw Error("unknown sidecar key '" + key + "'");
    }
  }
  RawDescriptor d;
  try {
    d.dims = j.at("dims").get<Int3>();
    d.spacing_mm = j.at("spacing_mm").get<Real3>();
    d.dtype = parse_scalar_type(j.at("dtype").get<std::string>());
    const auto e = j.at("endianness").get<std::string>();
    if (e == "little") {
      d.endianness = Endianness::kLittle;
    } else if (e == "big") {
      d.endianness = Endianness::kBig;
    } else {
      throw Error("unknown endianness '" + e + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid sidecar " + sidecar.string() + ": " + e.what());
  }
  return d;
}

void write_descriptor(const RawDescriptor& d, const fs::path& sidecar) {
  nlohmann::ordered_json j;
  j["dims"] = d.dims;
  j["spacing_mm"] = d.spacing_mm;
  j["dtype"] = to_string(d.dtype);
  j["endianness"] = d.endianness == Endianness::kLittle ? "little" : "big";
  std::ofstream out(sidecar);
  if (!out) throw Error("cannot write " + sidecar.string());
  out << j.dump(2) << '\n';
}

GrayscaleVolume load_raw_volume(const fs::path& raw, const RawDescriptor& meta) {
  const std::size_t count = voxel_count(meta.dims);
  const std::size_t expected = count * scalar_size(meta.dtype);
  std::error_code ec;
  const auto actual = fs::file_size(raw, ec);
  if (ec) throw Error("cannot stat " + raw.string() + ": " + ec.message());
  if (actual != expected) throw SizeMismatchError(expected, actual);

  std::vector<char> bytes(expected);
  std::ifstream in(raw, std::ios::binary);
  if (!in.read(bytes.data(), static_cast<std::streamsize>(expected))) {
    throw Error("short read from " + raw.string());
  }
  std::vector<float> values(count);
  switch (meta.dtype) {
    case ScalarType::kU8: decode<std::uint8_t>(bytes, meta.endianness, values); break;
    case ScalarType::kU16: decode<std::uint16_t>(bytes, meta.endianness, values); break;
    case ScalarType::kF32: decode<float>(bytes, meta.endianness, values); break;
  }
  return GrayscaleVolume(meta.dims, meta.spacing_mm, std::move(values));
}

GrayscaleVolume load_raw_volume(const fs::path& sidecar) {
  return load_raw_volume(raw_path_for(sidecar), read_descriptor(sidecar));
}

void save_raw_volume(const GrayscaleVolume& vol, const fs::path& sidecar, ScalarType dtype,
                     Endianness endianness) {
  std::vector<char> bytes;
  switch (dtype) {
    case ScalarType::kU8: encode<std::uint8_t>(vol.values(), endianness, bytes); break;
    case ScalarType::kU16: encode<std::uint16_t>(vol.values(), endianness, bytes); break;
    case ScalarType::kF32: encode<float>(vol.values(), endianness, bytes); break;
  }
  const auto raw = raw_path_for(sidecar);
  std::ofstream out(raw, std::ios::binary);
  if (!out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
    throw Error("cannot write " + raw.string());
  }
  write_descriptor({vol.dims(), vol.spacing(), dtype, endianness}, sidecar);
}

void save_voxel_grid(const VoxelGrid& grid, const fs::path& sidecar) {
  save_raw_volume(to_grayscale(grid, 0.0f, 1.0f), sidecar, ScalarType::kU8);
}

VoxelGrid threshold_segment(const GrayscaleVolume& vol, const SegmentationConfig& cfg,
                            double alpha_void) {
  if (!std::isfinite(cfg.threshold)) throw Error("segmentation threshold must be finite");
  VoxelGrid grid(vol.dims(), vol.spacing(), alpha_void);
  for (std::size_t n = 0; n < vol.size(); ++n) {
    const double v = vol[n];
    grid.set_material(n, cfg.inclusive ? v >= cfg.threshold : v > cfg.threshold);
  }
  return grid;
}

GrayscaleVolume to_grayscale(const VoxelGrid& grid, float low, float high) {
  std::vector<float> values(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) values[n] = grid.is_material(n) ? high : low;
  return GrayscaleVolume(grid.dims(), grid.spacing(), std::move(values));
}

double porosity(const VoxelGrid& grid) noexcept {
  return 1.0 - static_cast<double>(grid.material_count()) / static_cast<double>(grid.size());
}

VoxelGrid subvolume(const VoxelGrid& grid, Int3 origin, Int3 dims) {
  for (int d = 0; d < 3; ++d) {
    if (origin[d] < 0 || dims[d] < 1 || origin[d] + dims[d] > grid.dims()[d]) {
      throw Error("subvolume exceeds grid bounds");
    }
  }
  VoxelGrid out(dims, grid.spacing(), grid.alpha_void());
  for (int k = 0; k < dims[2]; ++k) {
    for (int j = 0; j < dims[1]; ++j) {
      for (int i = 0; i < dims[0]; ++i) {
        out.set_material(i, j, k, grid.is_material(origin[0] + i, origin[1] + j, origin[2] + k));
      }
    }
  }
  return out;
}

std::vector<VoxelGrid> extract_unit_cells(const VoxelGrid& grid, Int3 cell_voxels, int n) {
  Int3 counts{};
  for (int d = 0; d < 3; ++d) {
    if (cell_voxels[d] < 1) throw Error("cell size must be >= 1 voxel");
    if (cell_voxels[d] > grid.dims()[d]) throw Error("unit cell is larger than the grid");
    counts[d] = grid.dims()[d] / cell_voxels[d];
  }
  const long available = static_cast<long>(counts[0]) * counts[1] * counts[2];
  if (n < 0 || n > available) {
    throw Error("requested " + std::to_string(n) + " unit cells but only " +
                std::to_string(available) + " fit in the grid");
  }
  std::vector<VoxelGrid> cells;
  cells.reserve(n);
  for (int c = 0; c < n; ++c) {
    const int ci = c % counts[0];
    const int cj = (c / counts[0]) % counts[1];
    const int ck = c / (counts[0] * counts[1]);
    cells.push_back(subvolume(
        grid, {ci * cell_voxels[0], cj * cell_voxels[1], ck * cell_voxels[2]}, cell_voxels));
  }
  return cells;
}

}  // namespace voxcell
