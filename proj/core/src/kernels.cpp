#include "voxcell/kernels.hpp"

#include "voxcell/basis.hpp"
#include "voxcell/error.hpp"
#include "voxcell/parallel.hpp"

namespace voxcell {
namespace {

// Quadrature data of one voxel slot along one direction of the reference cell.
struct SlotRule {
  std::vector<double> weights;  // reference weights scaled to the sub-interval
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> derivatives;
};

std::vector<SlotRule> slot_rules(const ShapeBasis& basis, const GaussRule& gauss, int slots) {
  std::vector<SlotRule> rules(slots);
  const double width = 2.0 / slots;
  for (int s = 0; s < slots; ++s) {
    const double a = -1.0 + s * width;
    for (std::size_t q = 0; q < gauss.points.size(); ++q) {
      const double xi = a + 0.5 * width * (gauss.points[q] + 1.0);
      auto v = basis.eval(xi);
      rules[s].weights.push_back(0.5 * width * gauss.weights[q]);
      rules[s].values.push_back(std::move(v.values));
      rules[s].derivatives.push_back(std::move(v.derivatives));
    }
  }
  return rules;
}

}  // namespace

void fill_strain_operator(const Eigen::Ref<const Eigen::Matrix3Xd>& g, StrainOperator& B) {
  const auto n = g.cols();
  B.setZero(6, 3 * n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const double gx = g(0, a), gy = g(1, a), gz = g(2, a);
    const Eigen::Index c = 3 * a;
    B(0, c) = gx;
    B(1, c + 1) = gy;
    B(2, c + 2) = gz;
    B(3, c + 1) = gz;
    B(3, c + 2) = gy;
    B(4, c) = gz;
    B(4, c + 2) = gx;
    B(5, c) = gy;
    B(5, c + 1) = gx;
  }
}

VoxelKernelTable::VoxelKernelTable(const CellMesh& mesh, const ElasticMaterial& material)
    : ndof_(mesh.dofs_per_cell()), C_(material.stiffness()) {
  const int p = mesh.degree();
  const ShapeBasis basis(p);
  const GaussRule gauss = gauss_legendre(p + 1);
  const auto& vpc = mesh.voxels_per_cell();
  const auto h = mesh.cell_size();
  std::array<std::vector<SlotRule>, 3> rules;
  for (int d = 0; d < 3; ++d) rules[d] = slot_rules(basis, gauss, vpc[d]);
  const double jac = h[0] * h[1] * h[2] / 8.0;
  const Real3 dxi{2.0 / h[0], 2.0 / h[1], 2.0 / h[2]};

  const int nv = mesh.voxels_in_cell();
  const int nm = mesh.modes_per_cell();
  stiffness_.assign(nv, Eigen::MatrixXd::Zero(ndof_, ndof_));
  strain_.assign(nv, StrainOperator::Zero(6, ndof_));
  shape_.assign(nv, Eigen::VectorXd::Zero(nm));

  parallel_for(static_cast<std::size_t>(nv), [&](std::size_t vb, std::size_t ve, int) {
    Eigen::Matrix3Xd grad(3, nm);
    Eigen::VectorXd N(nm);
    StrainOperator B(6, ndof_);
    StrainOperator CB(6, ndof_);
    for (std::size_t v = vb; v < ve; ++v) {
      const int vi = static_cast<int>(v % vpc[0]);
      const int vj = static_cast<int>((v / vpc[0]) % vpc[1]);
      const int vk = static_cast<int>(v / (vpc[0] * vpc[1]));
      const auto& rx = rules[0][vi];
      const auto& ry = rules[1][vj];
      const auto& rz = rules[2][vk];
      for (std::size_t qz = 0; qz < rz.weights.size(); ++qz) {
        for (std::size_t qy = 0; qy < ry.weights.size(); ++qy) {
          for (std::size_t qx = 0; qx < rx.weights.size(); ++qx) {
            const double w = rx.weights[qx] * ry.weights[qy] * rz.weights[qz] * jac;
            for (int c = 0; c <= p; ++c) {
              for (int b = 0; b <= p; ++b) {
                for (int a = 0; a <= p; ++a) {
                  const int l = mesh.local_mode(a, b, c);
                  const double nx = rx.values[qx][a], ny = ry.values[qy][b], nz = rz.values[qz][c];
                  N[l] = nx * ny * nz;
                  grad(0, l) = rx.derivatives[qx][a] * dxi[0] * ny * nz;
                  grad(1, l) = nx * ry.derivatives[qy][b] * dxi[1] * nz;
                  grad(2, l) = nx * ny * rz.derivatives[qz][c] * dxi[2];
                }
              }
            }
            fill_strain_operator(grad, B);
            CB.noalias() = C_ * B;
            stiffness_[v].noalias() += w * B.transpose() * CB;
            strain_[v] += w * B;
            shape_[v] += w * N;
          }
        }
      }
      // Symmetrize away round-off.
      stiffness_[v] = 0.5 * (stiffness_[v] + stiffness_[v].transpose()).eval();
    }
  });
}

Eigen::MatrixXd VoxelKernelTable::solid_stiffness() const {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(ndof_, ndof_);
  for (const auto& Kv : stiffness_) K += Kv;
  return K;
}

Eigen::MatrixXd cell_stiffness(const VoxelKernelTable& table, std::span<const double> alphas) {
  if (alphas.size() != static_cast<std::size_t>(table.voxel_count())) {
    throw Error("cell_stiffness: expected " + std::to_string(table.voxel_count()) +
                " indicator values, got " + std::to_string(alphas.size()));
  }
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(table.dofs_per_cell(), table.dofs_per_cell());
  for (std::size_t v = 0; v < alphas.size(); ++v) K += alphas[v] * table.stiffness(static_cast<int>(v));
  return K;
}

}  // namespace voxcell
