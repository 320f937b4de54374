#include "voxcell/vtk.hpp"

#include <cstdio>
#include <fstream>

#include "voxcell/error.hpp"
#include "voxcell/fields.hpp"
#include "voxcell/material.hpp"

namespace voxcell {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

VoxelFields sample_voxel_fields(const FcmModel& model, const Eigen::VectorXd& u) {
  const auto samples = sample_voxel_centres(model, u);
  VoxelFields f;
  f.displacement.reserve(samples.size());
  f.von_mises.reserve(samples.size());
  for (const auto& s : samples) {
    f.displacement.push_back(s.displacement);
    f.von_mises.push_back(von_mises(s.stress));
  }
  return f;
}

void export_vtk(const VoxelGrid& grid, const VoxelFields* fields, const std::filesystem::path& path) {
  const std::size_t n = grid.size();
  if (fields && (fields->displacement.size() != n || fields->von_mises.size() != n)) {
    throw Error("field arrays do not match the voxel count");
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const auto d = grid.dims();
  const auto s = grid.spacing();
  out << "# vtk DataFile Version 3.0\n"
      << "voxcell voxel fields\n"
      << "ASCII\n"
      << "DATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << d[0] + 1 << ' ' << d[1] + 1 << ' ' << d[2] + 1 << '\n'
      << "ORIGIN 0 0 0\n"
      << "SPACING " << num(s[0]) << ' ' << num(s[1]) << ' ' << num(s[2]) << '\n'
      << "CELL_DATA " << n << '\n';
  out << "SCALARS alpha double 1\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < n; ++i) out << num(grid.alpha(i)) << '\n';
  out << "VECTORS displacement double\n";
  for (std::size_t i = 0; i < n; ++i) {
    if (fields) {
      const auto& v = fields->displacement[i];
      out << num(v[0]) << ' ' << num(v[1]) << ' ' << num(v[2]) << '\n';
    } else {
      out << "0 0 0\n";
    }
  }
  out << "SCALARS von_mises double 1\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < n; ++i) out << (fields ? num(fields->von_mises[i]) : "0") << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace voxcell
