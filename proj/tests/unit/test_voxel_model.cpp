#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "voxcell/error.hpp"
#include "voxcell/voxel_model.hpp"

using namespace voxcell;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  auto p = fs::temp_directory_path() / ("voxcell_vm_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
  fs::create_directories(p);
  return p;
}

void write_bytes(const fs::path& p, std::size_t n) {
  std::ofstream f(p, std::ios::binary);
  std::vector<char> zeros(n, 0);
  f.write(zeros.data(), static_cast<std::streamsize>(n));
}

void write_sidecar(const fs::path& p, const std::string& body) { std::ofstream(p) << body; }

}  // namespace

TEST(LoadRawVolume, ZeroU16FileGivesEightZeros) {
  const auto dir = temp_dir();
  write_sidecar(dir / "v.raw.json",
                R"({"dims":[2,2,2],"spacing_mm":[1,1,1],"dtype":"u16","endianness":"little"})");
  write_bytes(dir / "v.raw", 16);
  const auto vol = load_raw_volume(dir / "v.raw.json");
  ASSERT_EQ(vol.size(), 8u);
  for (float v : vol.values()) EXPECT_EQ(v, 0.0f);
  EXPECT_EQ(vol.spacing()[2], 1.0);
}

TEST(LoadRawVolume, ShortFileReportsByteCounts) {
  const auto dir = temp_dir();
  write_sidecar(dir / "v.raw.json",
                R"({"dims":[2,2,2],"spacing_mm":[1,1,1],"dtype":"u16","endianness":"little"})");
  write_bytes(dir / "v.raw", 15);
  try {
    load_raw_volume(dir / "v.raw.json");
    FAIL() << "expected a size mismatch";
  } catch (const SizeMismatchError& e) {
    EXPECT_EQ(e.expected_bytes(), 16u);
    EXPECT_EQ(e.actual_bytes(), 15u);
    EXPECT_NE(std::string(e.what()).find("16"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("15"), std::string::npos);
  }
}

TEST(LoadRawVolume, UnknownScalarTypeIsRejected) {
  const auto dir = temp_dir();
  write_sidecar(dir / "v.raw.json",
                R"({"dims":[1,1,1],"spacing_mm":[1,1,1],"dtype":"f64","endianness":"little"})");
  write_bytes(dir / "v.raw", 8);
  EXPECT_THROW(load_raw_volume(dir / "v.raw.json"), Error);
}

TEST(LoadRawVolume, UnknownSidecarKeyIsRejected) {
  const auto dir = temp_dir();
  write_sidecar(dir / "v.raw.json",
                R"({"dims":[1,1,1],"spacing_mm":[1,1,1],"dtype":"u8","endianness":"little","x":1})");
  EXPECT_THROW(read_descriptor(dir / "v.raw.json"), Error);
}

TEST(LoadRawVolume, RoundTripAllTypesAndByteOrders) {
  const auto dir = temp_dir();
  GrayscaleVolume vol({3, 2, 1}, {0.5, 0.25, 2.0}, {1000, 20000, 0, 65535, 14500, 7});
  for (auto dtype : {ScalarType::kU16, ScalarType::kF32}) {
    for (auto end : {Endianness::kLittle, Endianness::kBig}) {
      const auto path = dir / (std::string("r_") + to_string(dtype) + (end == Endianness::kBig ? "b" : "l") + ".raw.json");
      save_raw_volume(vol, path, dtype, end);
      EXPECT_EQ(fs::file_size(raw_path_for(path)), 6 * scalar_size(dtype));
      const auto back = load_raw_volume(path);
      EXPECT_EQ(back.dims(), vol.dims());
      EXPECT_EQ(back.spacing(), vol.spacing());
      for (std::size_t i = 0; i < vol.size(); ++i) EXPECT_EQ(back[i], vol[i]);
    }
  }
  // Little-endian u16 byte layout on disk.
  const auto p = dir / "le.raw.json";
  save_raw_volume(vol, p, ScalarType::kU16, Endianness::kLittle);
  std::ifstream f(raw_path_for(p), std::ios::binary);
  unsigned char b[2];
  f.read(reinterpret_cast<char*>(b), 2);
  EXPECT_EQ(b[0] | (b[1] << 8), 1000);
}

TEST(ThresholdSegment, AllZeroVolumeIsAllVoid) {
  GrayscaleVolume vol({4, 4, 4}, {1, 1, 1});
  const auto g = threshold_segment(vol, {14500.0, true});
  EXPECT_EQ(g.material_count(), 0u);
  EXPECT_DOUBLE_EQ(porosity(g), 1.0);
}

TEST(ThresholdSegment, ValueAtThresholdIsMaterialWhenInclusive) {
  GrayscaleVolume vol({1, 1, 1}, {1, 1, 1}, {14500.0f});
  EXPECT_TRUE(threshold_segment(vol, {14500.0, true}).is_material(0));
  EXPECT_FALSE(threshold_segment(vol, {14500.0, false}).is_material(0));
}

TEST(ThresholdSegment, BinaryVolumeReproducesMask) {
  VoxelGrid mask({5, 4, 3}, {1, 1, 1});
  for (std::size_t i = 0; i < mask.size(); ++i) mask.set_material(i, (i * 7) % 3 == 0);
  const auto vol = to_grayscale(mask, 0.0f, 20000.0f);
  EXPECT_EQ(threshold_segment(vol, {14500.0, true}), mask);
}

TEST(ThresholdSegment, KeepsDimsSpacingAndAlphaVoid) {
  GrayscaleVolume vol({2, 3, 4}, {0.1, 0.2, 0.3});
  const auto g = threshold_segment(vol, {1.0, true}, 1e-6);
  EXPECT_EQ(g.dims(), vol.dims());
  EXPECT_EQ(g.spacing(), vol.spacing());
  EXPECT_DOUBLE_EQ(g.alpha(0), 1e-6);
}

TEST(ThresholdSegment, SegmentationIsIdempotent) {
  VoxelGrid g({6, 6, 6}, {1, 1, 1});
  for (std::size_t i = 0; i < g.size(); ++i) g.set_material(i, (i * 13) % 5 < 2);
  const double t = 14500.0;
  const auto again = threshold_segment(to_grayscale(g, 0.0f, static_cast<float>(2 * t)), {t, true});
  EXPECT_EQ(again, g);
}

TEST(ThresholdSegment, PorosityNeverDecreasesWithThreshold) {
  std::vector<float> values(1000);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<float>((i * 7919) % 30000);
  GrayscaleVolume vol({10, 10, 10}, {1, 1, 1}, values);
  double last = -1.0;
  for (double t = 0; t <= 31000; t += 500) {
    const double phi = porosity(threshold_segment(vol, {t, true}));
    EXPECT_GE(phi, last);
    last = phi;
  }
}

TEST(Porosity, SolidAndHalf) {
  auto g = VoxelGrid::solid({4, 4, 4}, {1, 1, 1});
  EXPECT_DOUBLE_EQ(porosity(g), 0.0);
  for (std::size_t i = 0; i < g.size(); i += 2) g.set_material(i, false);
  EXPECT_DOUBLE_EQ(porosity(g), 0.5);
}

TEST(Porosity, VoidDefinedByMaskNotAlphaMagnitude) {
  VoxelGrid g({2, 1, 1}, {1, 1, 1}, 0.5);
  g.set_material(0, true);
  EXPECT_DOUBLE_EQ(porosity(g), 0.5);
}

TEST(ExtractUnitCells, EightCellsPartitionGrid) {
  VoxelGrid g({8, 8, 8}, {1, 1, 1});
  for (std::size_t i = 0; i < g.size(); ++i) g.set_material(i, (i * 31) % 7 < 3);
  const auto cells = extract_unit_cells(g, {4, 4, 4}, 8);
  ASSERT_EQ(cells.size(), 8u);
  std::size_t total = 0;
  for (int c = 0; c < 8; ++c) {
    const int ox = 4 * (c % 2), oy = 4 * ((c / 2) % 2), oz = 4 * (c / 4);
    EXPECT_EQ(cells[c], subvolume(g, {ox, oy, oz}, {4, 4, 4}));
    total += cells[c].material_count();
  }
  EXPECT_EQ(total, g.material_count());
}

TEST(ExtractUnitCells, CellLargerThanGridThrows) {
  VoxelGrid g({4, 4, 4}, {1, 1, 1});
  EXPECT_THROW(extract_unit_cells(g, {8, 8, 8}, 1), Error);
}

TEST(ExtractUnitCells, TooManyCellsThrows) {
  VoxelGrid g({8, 8, 8}, {1, 1, 1});
  EXPECT_THROW(extract_unit_cells(g, {4, 4, 4}, 9), Error);
}

TEST(ExtractUnitCells, FirstCellsOfTallSpecimenInScanOrder) {
  // 2 x 2 x 10 cells of 2^3 voxels; each cell tagged by its number of material voxels.
  VoxelGrid g({4, 4, 20}, {1, 1, 1});
  for (int cz = 0; cz < 10; ++cz)
    for (int cy = 0; cy < 2; ++cy)
      for (int cx = 0; cx < 2; ++cx) {
        const int id = cx + 2 * (cy + 2 * cz);
        for (int v = 0; v < id % 8 + 1; ++v) g.set_material(2 * cx + v % 2, 2 * cy + (v / 2) % 2, 2 * cz + v / 4, true);
      }
  const auto cells = extract_unit_cells(g, {2, 2, 2}, 24);
  ASSERT_EQ(cells.size(), 24u);
  for (int id = 0; id < 24; ++id) EXPECT_EQ(cells[id].material_count(), static_cast<std::size_t>(id % 8 + 1));
}
