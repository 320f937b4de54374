#include "voxcell/fields.hpp"

#include <algorithm>
#include <cmath>

#include "voxcell/basis.hpp"
#include "voxcell/error.hpp"
#include "voxcell/kernels.hpp"
#include "voxcell/parallel.hpp"

namespace voxcell {
namespace {

struct Locator {
  int cell;
  int voxel;
  double xi;
};

Locator locate(const CellMesh& mesh, int d, double x) {
  const double h = mesh.cell_size()[d];
  const int m = mesh.cells()[d];
  const double extent = m * h;
  const double tol = 1e-12 * extent;
  if (!(x >= -tol && x <= extent + tol)) throw DomainError("point lies outside the domain");
  const double s = std::clamp(x / h, 0.0, static_cast<double>(m));
  const int c = std::min(static_cast<int>(std::floor(s)), m - 1);
  const double xi = std::clamp(2.0 * (s - c) - 1.0, -1.0, 1.0);
  const int vpc = mesh.voxels_per_cell()[d];
  const int v = std::min(static_cast<int>(std::floor(0.5 * (xi + 1.0) * vpc)), vpc - 1);
  return {c, v, xi};
}

FieldSample evaluate(const FcmModel& model, const ShapeBasis& basis, const Eigen::VectorXd& u,
                     const Eigen::Vector3d& x) {
  const auto& mesh = model.mesh();
  const int p = mesh.degree();
  const auto h = mesh.cell_size();
  Locator loc[3];
  std::vector<double> val[3], der[3];
  for (int d = 0; d < 3; ++d) {
    loc[d] = locate(mesh, d, x[d]);
    val[d].resize(p + 1);
    der[d].resize(p + 1);
    basis.eval(loc[d].xi, val[d], der[d]);
    for (auto& g : der[d]) g *= 2.0 / h[d];
  }
  const std::size_t cell = mesh.cell_index(loc[0].cell, loc[1].cell, loc[2].cell);
  const auto dofs = mesh.cell_dofs(cell);

  FieldSample out;
  Eigen::Matrix3d grad = Eigen::Matrix3d::Zero();  // grad(i, j) = du_i / dx_j
  for (int c = 0; c <= p; ++c) {
    for (int b = 0; b <= p; ++b) {
      for (int a = 0; a <= p; ++a) {
        const int l = mesh.local_mode(a, b, c);
        const double N = val[0][a] * val[1][b] * val[2][c];
        const Eigen::Vector3d dN(der[0][a] * val[1][b] * val[2][c], val[0][a] * der[1][b] * val[2][c],
                                 val[0][a] * val[1][b] * der[2][c]);
        const Eigen::Vector3d ul(u[dofs[3 * l]], u[dofs[3 * l + 1]], u[dofs[3 * l + 2]]);
        out.displacement += N * ul;
        grad += ul * dN.transpose();
      }
    }
  }
  out.strain << grad(0, 0), grad(1, 1), grad(2, 2), grad(1, 2) + grad(2, 1), grad(0, 2) + grad(2, 0),
      grad(0, 1) + grad(1, 0);
  out.alpha = model.grid().alpha(mesh.voxel_index(cell, loc[0].voxel, loc[1].voxel, loc[2].voxel));
  out.stress = out.alpha * (model.material().stiffness() * out.strain);
  return out;
}

void check_size(const FcmModel& model, const Eigen::VectorXd& u) {
  if (static_cast<std::size_t>(u.size()) != model.mesh().dof_count()) {
    throw Error("solution vector does not match the mesh");
  }
}

}  // namespace

FieldSample evaluate_point(const FcmModel& model, const Eigen::VectorXd& u, const Eigen::Vector3d& x) {
  check_size(model, u);
  const ShapeBasis basis(model.mesh().degree());
  return evaluate(model, basis, u, x);
}

std::vector<FieldSample> evaluate_fields(const FcmModel& model, const Eigen::VectorXd& u,
                                         std::span<const Eigen::Vector3d> points) {
  check_size(model, u);
  const ShapeBasis basis(model.mesh().degree());
  std::vector<FieldSample> out(points.size());
  parallel_for(points.size(), [&](std::size_t b, std::size_t e, int) {
    for (std::size_t i = b; i < e; ++i) out[i] = evaluate(model, basis, u, points[i]);
  });
  return out;
}

std::vector<FieldSample> sample_voxel_centres(const FcmModel& model, const Eigen::VectorXd& u) {
  const auto& g = model.grid();
  const auto dims = g.dims();
  const auto s = g.spacing();
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(g.size());
  for (int k = 0; k < dims[2]; ++k) {
    for (int j = 0; j < dims[1]; ++j) {
      for (int i = 0; i < dims[0]; ++i) {
        pts.emplace_back((i + 0.5) * s[0], (j + 0.5) * s[1], (k + 0.5) * s[2]);
      }
    }
  }
  return evaluate_fields(model, u, pts);
}

}  // namespace voxcell
