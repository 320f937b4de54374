#include <benchmark/benchmark.h>

#include <random>

#include "voxcell/kernels.hpp"
#include "voxcell/lattice.hpp"
#include "voxcell/system.hpp"

using namespace voxcell;

namespace {

const ElasticMaterial kSteel(190000.0, 0.3);

VoxelGrid octet(double spacing_mm, Int3 reps) {
  const int n = static_cast<int>(std::lround(4.0 / spacing_mm));
  return tile(voxelize(octet_solid({}), {n, n, n}, {spacing_mm, spacing_mm, spacing_mm}, 2), reps);
}

}  // namespace

// Kernel table precomputation per (p, voxels per cell).
static void BM_KernelTable(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const int v = static_cast<int>(state.range(1));
  const CellMesh mesh({v, v, v}, {0.1, 0.1, 0.1}, {v, v, v}, p);
  for (auto _ : state) {
    VoxelKernelTable table(mesh, kSteel);
    benchmark::DoNotOptimize(table.stiffness(0).data());
  }
}
BENCHMARK(BM_KernelTable)->Args({1, 4})->Args({2, 4})->Args({3, 4})->Args({2, 8})->Unit(benchmark::kMillisecond);

// Matrix-free operator apply on an octet column.
static void BM_Matvec(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const FcmModel model(octet(0.2, {1, 1, 3}), {4, 4, 4}, p, kSteel);
  const FcmOperator op(model.mesh(), model.shared_patterns());
  Eigen::VectorXd x(op.size()), y(op.size());
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (auto& v : x) v = nd(rng);
  for (auto _ : state) {
    op.apply({x.data(), op.size()}, {y.data(), op.size()});
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["dofs"] = static_cast<double>(op.size());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(op.size()));
}
BENCHMARK(BM_Matvec)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

// Octet voxelization per spacing (um).
static void BM_Voxelize(benchmark::State& state) {
  const double h = static_cast<double>(state.range(0)) * 1e-3;
  const int n = static_cast<int>(std::lround(4.0 / h));
  const auto solid = octet_solid({});
  for (auto _ : state) {
    auto g = voxelize(solid, {n, n, n}, {h, h, h}, 2);
    benchmark::DoNotOptimize(g.mask().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n) * n * n);
}
BENCHMARK(BM_Voxelize)->Arg(200)->Arg(100)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
