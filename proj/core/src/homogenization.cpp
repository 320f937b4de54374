#include "voxcell/homogenization.hpp"

#include <cmath>
#include <unordered_map>

#include "voxcell/error.hpp"

namespace voxcell {

const char* to_string(BcKind bc) noexcept {
  switch (bc) {
    case BcKind::kPbc: return "pbc";
    case BcKind::kKubc: return "kubc";
    case BcKind::kSubc: return "subc";
  }
  return "?";
}

BcKind parse_bc_kind(const std::string& s) {
  if (s == "pbc") return BcKind::kPbc;
  if (s == "kubc") return BcKind::kKubc;
  if (s == "subc") return BcKind::kSubc;
  throw Error("unknown boundary condition '" + s + "' (expected pbc|kubc|subc)");
}

ConstrainedSpace constrain_pbc(const CellMesh& mesh, const Vector6& macro_strain) {
  const int p = mesh.degree();
  const Int3 period{mesh.cells()[0] * p, mesh.cells()[1] * p, mesh.cells()[2] * p};
  const auto ns = static_cast<std::int32_t>(mesh.scalar_mode_count());

  ConstrainedSpace space;
  space.particular = affine_field(mesh, macro_strain);
  space.reduced_of_full.assign(mesh.dof_count(), -1);

  std::unordered_map<std::int64_t, std::int32_t> reduced_scalar;
  std::int32_t next = 0;
  for (std::int32_t s = 0; s < ns; ++s) {
    const Int3 g = mesh.position_of(s);
    const Int3 c{g[0] % period[0], g[1] % period[1], g[2] % period[2]};
    if (c[0] == 0 && c[1] == 0 && c[2] == 0) continue;  // pinned corner
    const std::int64_t key =
        c[0] + static_cast<std::int64_t>(period[0]) * (c[1] + static_cast<std::int64_t>(period[1]) * c[2]);
    auto [it, inserted] = reduced_scalar.try_emplace(key, next);
    if (inserted) ++next;
    for (int k = 0; k < 3; ++k) space.reduced_of_full[3 * s + k] = 3 * it->second + k;
  }
  space.reduced_size = 3 * next;
  return space;
}

ConstrainedSpace constrain_kubc(const CellMesh& mesh, const Vector6& macro_strain) {
  ConstrainedSpace space;
  space.particular = affine_field(mesh, macro_strain);
  space.reduced_of_full.assign(mesh.dof_count(), -1);
  std::int32_t next = 0;
  const auto ns = static_cast<std::int32_t>(mesh.scalar_mode_count());
  for (std::int32_t s = 0; s < ns; ++s) {
    if (mesh.on_boundary(mesh.position_of(s))) continue;
    for (int k = 0; k < 3; ++k) space.reduced_of_full[3 * s + k] = next++;
  }
  space.reduced_size = next;
  return space;
}

ConstrainedProblem make_constrained_problem(const FcmModel& model, ConstrainedSpace space) {
  auto shared = std::make_shared<const ConstrainedSpace>(std::move(space));
  FcmOperator full(model.mesh(), model.shared_patterns());
  const Eigen::VectorXd Kup = full * shared->particular;
  ConstrainedProblem out{shared, FcmOperator(model.mesh(), model.shared_patterns(), shared.get()),
                         -shared->restrict(Kup)};
  return out;
}

ConstrainedProblem constrain_subc(const FcmModel& model, const Vector6& macro_stress,
                                  const SubcOptions& options) {
  const Eigen::Matrix3d S = stress_tensor(macro_stress);
  LoadSpec loads;
  for (int axis = 0; axis < 3; ++axis) {
    for (bool upper : {false, true}) {
      const Eigen::Vector3d n = (upper ? 1.0 : -1.0) * Eigen::Vector3d::Unit(axis);
      loads.tractions.push_back({{axis, upper}, S * n, options.material_only});
    }
  }
  ConstrainedProblem out{nullptr, FcmOperator(model.mesh(), model.shared_patterns()),
                         load_vector(model, loads)};
  const std::array<int, 6> modes{0, 1, 2, 3, 4, 5};
  Eigen::MatrixXd R = rigid_body_modes(model.mesh(), modes);
  out.rhs -= R * (R.transpose() * out.rhs);
  const double kappa = balanced_low_rank_weight(out.op.diagonal(), R);
  out.op.set_low_rank(std::move(R), kappa);
  return out;
}

Vector6 average_stress(const FcmModel& model, const Eigen::VectorXd& u) {
  const auto& mesh = model.mesh();
  const auto& pat = model.patterns();
  const int nd = mesh.dofs_per_cell();
  Eigen::VectorXd ul(nd);
  Vector6 s = Vector6::Zero();
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    const auto dofs = mesh.cell_dofs(c);
    for (int i = 0; i < nd; ++i) ul[i] = u[dofs[i]];
    s += pat.stress_integral[pat.cell_pattern[c]] * ul;
  }
  return s / mesh.volume();
}

Vector6 average_strain(const FcmModel& model, const Eigen::VectorXd& u) {
  const auto& mesh = model.mesh();
  const auto& G = model.patterns().strain_integral;
  const int nd = mesh.dofs_per_cell();
  Eigen::VectorXd ul(nd);
  Vector6 e = Vector6::Zero();
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    const auto dofs = mesh.cell_dofs(c);
    for (int i = 0; i < nd; ++i) ul[i] = u[dofs[i]];
    e += G * ul;
  }
  return e / mesh.volume();
}

std::optional<double> hill_mandel_residual(const FcmModel& model, const Eigen::VectorXd& u) {
  const double W = strain_energy(model, u) / model.mesh().volume();
  if (!(W > 0.0)) return std::nullopt;
  const double macro = 0.5 * average_stress(model, u).dot(average_strain(model, u));
  return std::abs(macro - W) / W;
}

EffectiveTensor effective_tensor(const FcmModel& model, BcKind bc,
                                 const HomogenizationOptions& options) {
  EffectiveTensor out;
  out.bc = bc;
  out.rve_id = options.rve_id;
  Matrix6 sig = Matrix6::Zero();
  Matrix6 eps = Matrix6::Zero();
  for (int j = 0; j < 6; ++j) {
    const Vector6 load = Vector6::Unit(j);
    ConstrainedProblem problem =
        bc == BcKind::kPbc    ? make_constrained_problem(model, constrain_pbc(model.mesh(), load))
        : bc == BcKind::kKubc ? make_constrained_problem(model, constrain_kubc(model.mesh(), load))
                              : constrain_subc(model, load, options.subc);
    out.dofs = problem.op.size();
    SolveResult res;
    try {
      res = solve_cg(problem.op, problem.rhs, options.solver);
    } catch (const Error& e) {
      throw LoadCaseError(j, e.what());
    }
    out.solver[j] = res.report;
    if (!res.report.converged) {
      throw LoadCaseError(j, "solver did not converge (relative residual " +
                                 std::to_string(res.report.relative_residual) + " after " +
                                 std::to_string(res.report.iterations) + " iterations)");
    }
    const Eigen::VectorXd u = problem.expand(res.solution);
    sig.col(j) = average_stress(model, u);
    eps.col(j) = average_strain(model, u);
    out.hill_mandel[j] = hill_mandel_residual(model, u);
  }
  Matrix6 C;
  if (bc == BcKind::kSubc) {
    const Eigen::FullPivLU<Matrix6> lu(eps);
    if (!lu.isInvertible()) throw Error("SUBC strain responses are linearly dependent");
    C = sig * lu.inverse();
  } else {
    C = sig;
  }
  const double norm = C.norm();
  out.asymmetry = norm > 0.0 ? (C - C.transpose()).norm() / norm : 0.0;
  out.C_star = 0.5 * (C + C.transpose());
  return out;
}

Eigen::Vector3d directional_modulus(const Matrix6& C_star) {
  const Eigen::FullPivLU<Matrix6> lu(C_star);
  if (!lu.isInvertible()) throw RankError(static_cast<std::size_t>(lu.rank()), 6);
  const Matrix6 S = lu.inverse();
  return {1.0 / S(0, 0), 1.0 / S(1, 1), 1.0 / S(2, 2)};
}

OrderingReport bound_ordering_check(const Matrix6& C_kubc, const Matrix6& C_pbc,
                                    const Matrix6& C_subc, double tol) {
  auto min_eig = [](const Matrix6& A) {
    const Matrix6 sym = 0.5 * (A + A.transpose());
    return Eigen::SelfAdjointEigenSolver<Matrix6>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  };
  OrderingReport r;
  const Matrix6 sym = 0.5 * (C_pbc + C_pbc.transpose());
  r.norm_pbc = Eigen::SelfAdjointEigenSolver<Matrix6>(sym, Eigen::EigenvaluesOnly)
                   .eigenvalues()
                   .cwiseAbs()
                   .maxCoeff();
  r.min_eig_kubc_pbc = min_eig(C_kubc - C_pbc);
  r.min_eig_pbc_subc = min_eig(C_pbc - C_subc);
  const double bound = -tol * r.norm_pbc;
  r.pass = r.min_eig_kubc_pbc >= bound && r.min_eig_pbc_subc >= bound;
  return r;
}

void summarize(EnsembleStats& stats) {
  stats.n = stats.moduli.size();
  stats.mean.setZero();
  stats.std_dev.setZero();
  stats.single_sample = stats.n == 1;
  if (stats.n == 0) return;
  // Shifted by the first sample, so identical cells give std exactly 0.
  const Eigen::Vector3d m0 = stats.moduli.front();
  for (const auto& m : stats.moduli) stats.mean += m - m0;
  stats.mean = m0 + stats.mean / static_cast<double>(stats.n);
  if (stats.n < 2) return;
  for (const auto& m : stats.moduli) stats.std_dev += (m - stats.mean).cwiseAbs2();
  stats.std_dev = (stats.std_dev / static_cast<double>(stats.n - 1)).cwiseSqrt();
}

EnsembleStats ensemble_homogenize(const std::vector<VoxelGrid>& cells,
                                  const ElasticMaterial& material, BcKind bc,
                                  const EnsembleOptions& options) {
  EnsembleStats stats;
  std::shared_ptr<const VoxelKernelTable> kernels;
  Int3 kernel_dims{0, 0, 0};
  Real3 kernel_spacing{0, 0, 0};
  for (std::size_t i = 0; i < cells.size(); ++i) {
    try {
      const auto& g = cells[i];
      const bool reuse = kernels && g.dims() == kernel_dims && g.spacing() == kernel_spacing;
      FcmModel model = reuse ? FcmModel(g, options.voxels_per_cell, options.degree, material, kernels)
                             : FcmModel(g, options.voxels_per_cell, options.degree, material);
      if (!reuse) {
        kernels = model.shared_kernels();
        kernel_dims = g.dims();
        kernel_spacing = g.spacing();
      }
      HomogenizationOptions h = options.homogenization;
      if (h.rve_id.empty()) h.rve_id = "cell-" + std::to_string(i);
      auto t = effective_tensor(model, bc, h);
      stats.moduli.push_back(directional_modulus(t.C_star));
      stats.tensors.push_back(std::move(t));
    } catch (const std::exception& e) {
      stats.failures.push_back({i, e.what()});
    }
  }
  summarize(stats);
  return stats;
}

}  // namespace voxcell
