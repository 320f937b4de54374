#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "voxcell/dns.hpp"
#include "voxcell/error.hpp"
#include "voxcell/homogenization.hpp"
#include "voxcell/lattice.hpp"
#include "voxcell/report.hpp"
#include "voxcell/vtk.hpp"

using namespace voxcell;
namespace fs = std::filesystem;

namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("voxcell_io_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string l;
  while (std::getline(ss, l)) out.push_back(l);
  return out;
}

}  // namespace

using VtkExport = TempDir;

TEST_F(VtkExport, SingleVoxelFileLayout) {
  VoxelGrid g({1, 1, 1}, {0.025, 0.025, 0.025});
  const auto path = dir_ / "one.vtk";
  export_vtk(g, nullptr, path);
  const auto l = lines(slurp(path));
  const std::vector<std::string> expected{"# vtk DataFile Version 3.0",
                                          "voxcell voxel fields",
                                          "ASCII",
                                          "DATASET STRUCTURED_POINTS",
                                          "DIMENSIONS 2 2 2",
                                          "ORIGIN 0 0 0",
                                          "SPACING 0.025 0.025 0.025",
                                          "CELL_DATA 1",
                                          "SCALARS alpha double 1",
                                          "LOOKUP_TABLE default",
                                          "1e-11",
                                          "VECTORS displacement double",
                                          "0 0 0",
                                          "SCALARS von_mises double 1",
                                          "LOOKUP_TABLE default",
                                          "0"};
  EXPECT_EQ(l, expected);
}

TEST_F(VtkExport, HeaderMatchesGridMetadata) {
  const auto g = VoxelGrid::solid({3, 5, 7}, {0.1, 0.2, 0.05});
  const auto path = dir_ / "meta.vtk";
  export_vtk(g, nullptr, path);
  const auto l = lines(slurp(path));
  EXPECT_EQ(l[4], "DIMENSIONS 4 6 8");
  EXPECT_EQ(l[6], "SPACING 0.1 0.2 0.05");
  EXPECT_EQ(l[7], "CELL_DATA 105");
  EXPECT_EQ(l.size(), 8u + 2 + 105 + 1 + 105 + 2 + 105);
}

TEST_F(VtkExport, FieldsAreWrittenAndDeterministic) {
  const auto g = tile(voxelize(octet_solid({}), {10, 10, 10}, {0.4, 0.4, 0.4}, 2), {1, 1, 2});
  const FcmModel model(g, {2, 2, 2}, 1, ElasticMaterial(190000.0, 0.3));
  const auto r = tensile_test(model, {});
  const auto f = sample_voxel_fields(model, r.solution);
  ASSERT_EQ(f.displacement.size(), g.size());
  ASSERT_EQ(f.von_mises.size(), g.size());
  export_vtk(g, &f, dir_ / "a.vtk");
  export_vtk(g, &f, dir_ / "b.vtk");
  EXPECT_EQ(slurp(dir_ / "a.vtk"), slurp(dir_ / "b.vtk"));

  double max_vm = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n)
    if (g.is_material(n)) max_vm = std::max(max_vm, f.von_mises[n]);
  EXPECT_GT(max_vm, 0.0);
  VoxelFields bad = f;
  bad.von_mises.pop_back();
  EXPECT_THROW(export_vtk(g, &bad, dir_ / "c.vtk"), Error);
  EXPECT_THROW(export_vtk(g, nullptr, dir_ / "missing" / "d.vtk"), Error);
}

#ifdef VOXCELL_SCRIPT_DIR
TEST_F(VtkExport, ThirdPartyReaderLoadsOctetExport) {
  const auto g = voxelize(octet_solid({}), {20, 20, 20}, {0.2, 0.2, 0.2}, 2);
  const FcmModel model(g, {4, 4, 4}, 1, ElasticMaterial(190000.0, 0.3));
  VoxelFields f;
  f.displacement.assign(g.size(), Eigen::Vector3d(1e-3, -2e-3, 0.5));
  f.von_mises.assign(g.size(), 12.5);
  export_vtk(g, &f, dir_ / "octet.vtk");
  const std::string cmd = "python3 " VOXCELL_SCRIPT_DIR "/read_vtk.py " + (dir_ / "octet.vtk").string() +
                          " 20 20 20";
  const int status = std::system(cmd.c_str());
  if (WEXITSTATUS(status) == 77) GTEST_SKIP() << "meshio not installed";
  EXPECT_EQ(WEXITSTATUS(status), 0);
}
#endif

using Reports = TempDir;

TEST_F(Reports, EmptyEnsembleIsValidJson) {
  const auto s = ensemble_homogenize({}, ElasticMaterial(190000.0, 0.3), BcKind::kPbc);
  const Json j = to_json(s, BcKind::kPbc);
  EXPECT_EQ(j["n"], 0);
  EXPECT_TRUE(j["cells"].empty());
  EXPECT_TRUE(j["failures"].empty());
  EXPECT_TRUE(j["E_mean"].empty());
  write_report(j, dir_ / "empty.json");
  EXPECT_EQ(Json::parse(slurp(dir_ / "empty.json")), j);
}

TEST_F(Reports, TensorKeysAndOrder) {
  const FcmModel model(VoxelGrid::solid({2, 2, 2}, {0.5, 0.5, 0.5}), {1, 1, 1}, 1,
                       ElasticMaterial(190000.0, 0.3));
  const auto t = effective_tensor(model, BcKind::kKubc);
  const Json j = to_json(t);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  const std::vector<std::string> expected{"bc", "C_star", "E_dir", "hill_mandel_residual", "solver",
                                          "rve_id", "asymmetry", "dofs", "hill_mandel_per_case"};
  EXPECT_EQ(keys, expected);
  EXPECT_EQ(j["bc"], "kubc");
  EXPECT_EQ(j["C_star"].size(), 6u);
  EXPECT_NEAR(j["E_dir"][2].get<double>(), 190000.0, 1e-4);
  EXPECT_EQ(j["solver"].size(), 6u);
}

TEST_F(Reports, SameInputsGiveIdenticalBytesApartFromRuntime) {
  auto run = [&](const fs::path& p) {
    const FcmModel model(VoxelGrid::solid({2, 2, 2}, {0.5, 0.5, 0.5}), {1, 1, 1}, 2,
                         ElasticMaterial(190000.0, 0.3));
    Json doc = to_json(effective_tensor(model, BcKind::kPbc));
    doc["manifest"] = make_manifest("homogenize", {{"bc", "pbc"}}, 0.0, 1);
    doc["manifest"].erase("runtime");
    write_report(doc, p);
  };
  run(dir_ / "a.json");
  run(dir_ / "b.json");
  const auto a = slurp(dir_ / "a.json");
  EXPECT_EQ(a, slurp(dir_ / "b.json"));
  EXPECT_EQ(a.back(), '\n');
}

TEST_F(Reports, ManifestLayout) {
  const Json m = make_manifest("dns", {{"degree", 2}}, 1.5, 4);
  EXPECT_EQ(m["tool"], "voxcell");
  EXPECT_EQ(m["version"], version());
  EXPECT_EQ(m["command"], "dns");
  EXPECT_EQ(m["config"]["degree"], 2);
  EXPECT_EQ(m["runtime"]["threads"], 4);
  EXPECT_EQ(m["runtime"]["timestamp"].get<std::string>().size(), 20u);
}

TEST_F(Reports, CsvColumns) {
  std::vector<SweepRow> rows(2);
  rows[0].phi = 0.75;
  rows[0].E_star = 10000.0;
  rows[0].dofs = 123;
  rows[0].iterations = 7;
  rows[1].phi = 0.7;
  rows[1].error = "failed";
  SweepResolution res;
  res.disc = {{4, 4, 4}, 2};
  write_sweep_csv(rows, res, dir_ / "s.csv");
  const auto l = lines(slurp(dir_ / "s.csv"));
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[0], "phi,E_star_MPa,dofs,p,voxels_per_cell,solver_iters");
  EXPECT_EQ(l[1], "0.75,10000,123,2,4x4x4,7");
  EXPECT_EQ(l[2], "0.7,,0,2,4x4x4,0");

  ConvergenceStudy study;
  study.rows.resize(1);
  study.rows[0].disc = {{2, 2, 2}, 3};
  study.rows[0].E_star = 9000.5;
  study.rows[0].dofs = 10;
  write_convergence_csv(study, 0.5, dir_ / "c.csv");
  EXPECT_EQ(lines(slurp(dir_ / "c.csv"))[1], "0.5,9000.5,10,3,2x2x2,0");
}
