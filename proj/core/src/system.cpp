#include "voxcell/system.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>

#include "voxcell/basis.hpp"
#include "voxcell/error.hpp"
#include "voxcell/parallel.hpp"

namespace voxcell {

// --- model and patterns -----------------------------------------------------

FcmModel::FcmModel(VoxelGrid grid, Int3 voxels_per_cell, int degree,
                   const ElasticMaterial& material)
    : FcmModel(std::move(grid), voxels_per_cell, degree, material, nullptr) {}

FcmModel::FcmModel(VoxelGrid grid, Int3 voxels_per_cell, int degree,
                   const ElasticMaterial& material,
                   std::shared_ptr<const VoxelKernelTable> kernels)
    : grid_(std::move(grid)),
      mesh_(grid_.dims(), grid_.spacing(), voxels_per_cell, degree),
      material_(material),
      kernels_(std::move(kernels)) {
  if (!kernels_) {
    kernels_ = std::make_shared<const VoxelKernelTable>(mesh_, material_);
  } else if (kernels_->dofs_per_cell() != mesh_.dofs_per_cell() ||
             kernels_->voxel_count() != mesh_.voxels_in_cell()) {
    throw Error("kernel table does not match the mesh");
  }
  patterns_ = build_cell_patterns(mesh_, grid_, *kernels_);
}

std::vector<double> FcmModel::cell_alphas(std::size_t c) const {
  const auto& vpc = mesh_.voxels_per_cell();
  std::vector<double> a(mesh_.voxels_in_cell());
  for (int k = 0; k < vpc[2]; ++k) {
    for (int j = 0; j < vpc[1]; ++j) {
      for (int i = 0; i < vpc[0]; ++i) {
        a[mesh_.local_voxel(i, j, k)] = grid_.alpha(mesh_.voxel_index(c, i, j, k));
      }
    }
  }
  return a;
}

std::shared_ptr<const CellPatterns> build_cell_patterns(const CellMesh& mesh, const VoxelGrid& grid,
                                                        const VoxelKernelTable& kernels) {
  auto out = std::make_shared<CellPatterns>();
  const int nv = mesh.voxels_in_cell();
  const auto& vpc = mesh.voxels_per_cell();
  const auto mask = grid.mask();

  std::unordered_map<std::string, std::int32_t> ids;
  std::vector<std::string> keys;
  out->cell_pattern.resize(mesh.cell_count());
  std::string key(static_cast<std::size_t>(nv), '\0');
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    for (int k = 0; k < vpc[2]; ++k) {
      for (int j = 0; j < vpc[1]; ++j) {
        for (int i = 0; i < vpc[0]; ++i) {
          key[mesh.local_voxel(i, j, k)] = static_cast<char>(mask[mesh.voxel_index(c, i, j, k)]);
        }
      }
    }
    auto [it, inserted] = ids.try_emplace(key, static_cast<std::int32_t>(keys.size()));
    if (inserted) keys.push_back(key);
    out->cell_pattern[c] = it->second;
  }

  const auto np = keys.size();
  const int nd = mesh.dofs_per_cell();
  out->stiffness.resize(np);
  out->stress_integral.resize(np);
  out->load_integral.resize(np);
  const Matrix6& C = kernels.material_stiffness();
  parallel_for(np, [&](std::size_t b, std::size_t e, int) {
    for (std::size_t q = b; q < e; ++q) {
      Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nd, nd);
      StrainOperator G = StrainOperator::Zero(6, nd);
      Eigen::VectorXd L = Eigen::VectorXd::Zero(mesh.modes_per_cell());
      for (int v = 0; v < nv; ++v) {
        const double alpha = keys[q][v] ? 1.0 : grid.alpha_void();
        K += alpha * kernels.stiffness(v);
        G += alpha * kernels.strain_integral(v);
        L += alpha * kernels.shape_integral(v);
      }
      out->stiffness[q] = std::move(K);
      out->stress_integral[q] = C * G;
      out->load_integral[q] = std::move(L);
    }
  });
  out->strain_integral = StrainOperator::Zero(6, nd);
  for (int v = 0; v < nv; ++v) out->strain_integral += kernels.strain_integral(v);
  return out;
}

// --- constrained spaces -------------------------------------------------------

Eigen::VectorXd ConstrainedSpace::expand(const Eigen::VectorXd& r) const {
  Eigen::VectorXd u = particular;
  for (std::size_t i = 0; i < reduced_of_full.size(); ++i) {
    if (reduced_of_full[i] >= 0) u[static_cast<Eigen::Index>(i)] += r[reduced_of_full[i]];
  }
  return u;
}

Eigen::VectorXd ConstrainedSpace::restrict(const Eigen::VectorXd& f) const {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(reduced_size);
  for (std::size_t i = 0; i < reduced_of_full.size(); ++i) {
    if (reduced_of_full[i] >= 0) r[reduced_of_full[i]] += f[static_cast<Eigen::Index>(i)];
  }
  return r;
}

// --- operators ------------------------------------------------------------

Eigen::VectorXd LinearOperator::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(static_cast<Eigen::Index>(size()));
  apply({x.data(), static_cast<std::size_t>(x.size())}, {y.data(), static_cast<std::size_t>(y.size())});
  return y;
}

void DenseOperator::apply(std::span<const double> x, std::span<double> y) const {
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  yv.noalias() = A_ * xv;
}

FcmOperator::FcmOperator(const CellMesh& mesh, std::shared_ptr<const CellPatterns> patterns,
                         const ConstrainedSpace* space)
    : n_(space ? static_cast<std::size_t>(space->reduced_size) : mesh.dof_count()),
      ndof_cell_(mesh.dofs_per_cell()),
      ncells_(mesh.cell_count()),
      patterns_(std::move(patterns)) {
  if (space && space->reduced_of_full.size() != mesh.dof_count()) {
    throw Error("constrained space does not match the mesh");
  }
  gather_.resize(ncells_ * ndof_cell_);
  for (std::size_t c = 0; c < ncells_; ++c) {
    const auto dofs = mesh.cell_dofs(c);
    for (int i = 0; i < ndof_cell_; ++i) {
      gather_[c * ndof_cell_ + i] = space ? space->reduced_of_full[dofs[i]] : dofs[i];
    }
  }
  // Group cells by pattern (stable, so the order is deterministic) and cut
  // each group into batches small enough to stay in cache.
  constexpr std::uint32_t kBatch = 32;
  std::vector<std::vector<std::int32_t>> groups(patterns_->stiffness.size());
  for (std::size_t c = 0; c < ncells_; ++c) {
    groups[patterns_->cell_pattern[c]].push_back(static_cast<std::int32_t>(c));
  }
  batch_cells_.reserve(ncells_);
  for (std::size_t q = 0; q < groups.size(); ++q) {
    for (std::size_t b = 0; b < groups[q].size(); b += kBatch) {
      const auto count = static_cast<std::uint32_t>(std::min<std::size_t>(kBatch, groups[q].size() - b));
      batches_.push_back({static_cast<std::int32_t>(q), static_cast<std::uint32_t>(batch_cells_.size()), count});
      batch_cells_.insert(batch_cells_.end(), groups[q].begin() + static_cast<std::ptrdiff_t>(b),
                          groups[q].begin() + static_cast<std::ptrdiff_t>(b + count));
    }
  }
}

void FcmOperator::add_boundary_block(BoundaryBlock block) { blocks_.push_back(std::move(block)); }

void FcmOperator::set_low_rank(Eigen::MatrixXd basis, double weight) {
  if (basis.rows() != static_cast<Eigen::Index>(n_)) throw Error("low-rank basis has wrong size");
  low_rank_ = std::move(basis);
  low_rank_weight_ = weight;
}

void FcmOperator::apply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  const int nd = ndof_cell_;
  const std::size_t nb = batches_.size();
  const int chunks = chunk_count(nb);
  std::vector<Eigen::VectorXd> partial(chunks > 1 ? chunks - 1 : 0);

  parallel_for(nb, [&](std::size_t bb, std::size_t be, int chunk) {
    double* out = y.data();
    if (chunk > 0) {
      partial[chunk - 1] = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
      out = partial[chunk - 1].data();
    }
    Eigen::MatrixXd X(nd, 32), Y(nd, 32);
    for (std::size_t b = bb; b < be; ++b) {
      const Batch& batch = batches_[b];
      const auto cols = static_cast<Eigen::Index>(batch.count);
      for (Eigen::Index j = 0; j < cols; ++j) {
        const std::int32_t* g = gather_.data() + static_cast<std::size_t>(batch_cells_[batch.begin + j]) * nd;
        double* xc = X.col(j).data();
        for (int i = 0; i < nd; ++i) xc[i] = g[i] >= 0 ? x[g[i]] : 0.0;
      }
      Y.leftCols(cols).noalias() = patterns_->stiffness[batch.pattern] * X.leftCols(cols);
      for (Eigen::Index j = 0; j < cols; ++j) {
        const std::int32_t* g = gather_.data() + static_cast<std::size_t>(batch_cells_[batch.begin + j]) * nd;
        const double* yc = Y.col(j).data();
        for (int i = 0; i < nd; ++i) {
          if (g[i] >= 0) out[g[i]] += yc[i];
        }
      }
    }
  });
  // Fixed-order merge keeps results independent of thread timing.
  for (const auto& part : partial) {
    for (std::size_t i = 0; i < n_; ++i) y[i] += part[static_cast<Eigen::Index>(i)];
  }

  for (const auto& b : blocks_) {
    const std::int32_t* g = gather_.data() + static_cast<std::size_t>(b.cell) * nd;
    const auto nm = b.matrix.rows();
    for (int comp = 0; comp < 3; ++comp) {
      if (!b.components[comp]) continue;
      Eigen::VectorXd xl(nm);
      for (Eigen::Index a = 0; a < nm; ++a) {
        const auto gi = g[3 * a + comp];
        xl[a] = gi >= 0 ? x[gi] : 0.0;
      }
      const Eigen::VectorXd yl = b.matrix * xl;
      for (Eigen::Index a = 0; a < nm; ++a) {
        const auto gi = g[3 * a + comp];
        if (gi >= 0) y[gi] += yl[a];
      }
    }
  }

  if (low_rank_weight_ != 0.0 && low_rank_.cols() > 0) {
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(n_));
    Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(n_));
    const Eigen::VectorXd coeff = low_rank_.transpose() * xv;
    yv.noalias() += low_rank_weight_ * (low_rank_ * coeff);
  }
}

Eigen::VectorXd FcmOperator::diagonal() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
  const int nd = ndof_cell_;
  auto accumulate = [&](const std::int32_t* g, auto&& entry, int count, int stride, int offset) {
    for (int i = 0; i < count; ++i) {
      const auto gi = g[stride * i + offset];
      if (gi < 0) continue;
      for (int j = 0; j < count; ++j) {
        if (g[stride * j + offset] == gi) d[gi] += entry(i, j);
      }
    }
  };
  for (std::size_t c = 0; c < ncells_; ++c) {
    const auto& K = patterns_->stiffness[patterns_->cell_pattern[c]];
    accumulate(gather_.data() + c * nd, [&](int i, int j) { return K(i, j); }, nd, 1, 0);
  }
  for (const auto& b : blocks_) {
    const std::int32_t* g = gather_.data() + static_cast<std::size_t>(b.cell) * nd;
    for (int comp = 0; comp < 3; ++comp) {
      if (!b.components[comp]) continue;
      accumulate(g, [&](int i, int j) { return b.matrix(i, j); },
                 static_cast<int>(b.matrix.rows()), 3, comp);
    }
  }
  if (low_rank_weight_ != 0.0 && low_rank_.cols() > 0) {
    d += low_rank_weight_ * low_rank_.rowwise().squaredNorm();
  }
  return d;
}

Eigen::SparseMatrix<double> FcmOperator::to_sparse() const {
  std::vector<Eigen::Triplet<double>> t;
  const int nd = ndof_cell_;
  for (std::size_t c = 0; c < ncells_; ++c) {
    const auto& K = patterns_->stiffness[patterns_->cell_pattern[c]];
    const std::int32_t* g = gather_.data() + c * nd;
    for (int j = 0; j < nd; ++j) {
      if (g[j] < 0) continue;
      for (int i = 0; i < nd; ++i) {
        if (g[i] >= 0 && K(i, j) != 0.0) t.emplace_back(g[i], g[j], K(i, j));
      }
    }
  }
  for (const auto& b : blocks_) {
    const std::int32_t* g = gather_.data() + static_cast<std::size_t>(b.cell) * nd;
    for (int comp = 0; comp < 3; ++comp) {
      if (!b.components[comp]) continue;
      for (Eigen::Index j = 0; j < b.matrix.cols(); ++j) {
        const auto gj = g[3 * j + comp];
        if (gj < 0) continue;
        for (Eigen::Index i = 0; i < b.matrix.rows(); ++i) {
          const auto gi = g[3 * i + comp];
          if (gi >= 0 && b.matrix(i, j) != 0.0) t.emplace_back(gi, gj, b.matrix(i, j));
        }
      }
    }
  }
  if (low_rank_weight_ != 0.0 && low_rank_.cols() > 0) {
    const Eigen::MatrixXd dense = low_rank_weight_ * low_rank_ * low_rank_.transpose();
    for (Eigen::Index j = 0; j < dense.cols(); ++j) {
      for (Eigen::Index i = 0; i < dense.rows(); ++i) {
        if (dense(i, j) != 0.0) t.emplace_back(i, j, dense(i, j));
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

// --- boundary integration -----------------------------------------------------

void for_each_face_point(
    const FcmModel& model, const BoxFace& face,
    const std::function<void(std::size_t, std::size_t, double, const Eigen::Vector3d&,
                             const Eigen::VectorXd&)>& fn) {
  const auto& mesh = model.mesh();
  const int p = mesh.degree();
  const ShapeBasis basis(p);
  const GaussRule gauss = gauss_legendre(p + 1);
  const int a = face.axis;
  const int t1 = (a + 1) % 3, t2 = (a + 2) % 3;
  const auto& vpc = mesh.voxels_per_cell();
  const auto& cells = mesh.cells();
  const auto h = mesh.cell_size();

  const auto normal_values = basis.eval(face.upper ? 1.0 : -1.0).values;

  // Per tangential direction: reference points and weights of every slot.
  struct Slot {
    std::vector<double> xi, w;
    std::vector<std::vector<double>> n;
  };
  auto slots = [&](int d) {
    std::vector<Slot> s(vpc[d]);
    const double width = 2.0 / vpc[d];
    for (int k = 0; k < vpc[d]; ++k) {
      for (std::size_t q = 0; q < gauss.points.size(); ++q) {
        const double xi = -1.0 + k * width + 0.5 * width * (gauss.points[q] + 1.0);
        s[k].xi.push_back(xi);
        s[k].w.push_back(0.5 * width * gauss.weights[q]);
        s[k].n.push_back(basis.eval(xi).values);
      }
    }
    return s;
  };
  const auto s1 = slots(t1);
  const auto s2 = slots(t2);
  const double jac = 0.25 * h[t1] * h[t2];

  Eigen::VectorXd N(mesh.modes_per_cell());
  for (int c2 = 0; c2 < cells[t2]; ++c2) {
    for (int c1 = 0; c1 < cells[t1]; ++c1) {
      Int3 cc{};
      cc[a] = face.upper ? cells[a] - 1 : 0;
      cc[t1] = c1;
      cc[t2] = c2;
      const std::size_t cell = mesh.cell_index(cc[0], cc[1], cc[2]);
      for (int v2 = 0; v2 < vpc[t2]; ++v2) {
        for (int v1 = 0; v1 < vpc[t1]; ++v1) {
          Int3 lv{};
          lv[a] = face.upper ? vpc[a] - 1 : 0;
          lv[t1] = v1;
          lv[t2] = v2;
          const std::size_t voxel = mesh.voxel_index(cell, lv[0], lv[1], lv[2]);
          for (std::size_t q2 = 0; q2 < s2[v2].xi.size(); ++q2) {
            for (std::size_t q1 = 0; q1 < s1[v1].xi.size(); ++q1) {
              const double w = s1[v1].w[q1] * s2[v2].w[q2] * jac;
              Eigen::Vector3d x;
              x[a] = face.upper ? cells[a] * h[a] : 0.0;
              x[t1] = (c1 + 0.5 * (s1[v1].xi[q1] + 1.0)) * h[t1];
              x[t2] = (c2 + 0.5 * (s2[v2].xi[q2] + 1.0)) * h[t2];
              for (int k = 0; k <= p; ++k) {
                for (int j = 0; j <= p; ++j) {
                  for (int i = 0; i <= p; ++i) {
                    const int idx[3] = {i, j, k};
                    N[mesh.local_mode(i, j, k)] =
                        normal_values[idx[a]] * s1[v1].n[q1][idx[t1]] * s2[v2].n[q2][idx[t2]];
                  }
                }
              }
              fn(cell, voxel, w, x, N);
            }
          }
        }
      }
    }
  }
}

double PenaltyConfig::default_beta(const FcmModel& model, double factor) {
  const auto h = model.mesh().cell_size();
  return factor * model.material().youngs_modulus() / std::min({h[0], h[1], h[2]});
}

void add_penalty(const FcmModel& model, const PenaltyConfig& penalty, FcmOperator& op,
                 Eigen::VectorXd& rhs) {
  if (penalty.faces.empty()) return;
  if (!(penalty.beta > 0.0)) throw Error("penalty magnitude must be positive");
  const auto& mesh = model.mesh();
  const int nm = mesh.modes_per_cell();
  for (const auto& pf : penalty.faces) {
    std::map<std::size_t, Eigen::MatrixXd> blocks;
    for_each_face_point(model, pf.face,
                        [&](std::size_t cell, std::size_t voxel, double w,
                            const Eigen::Vector3d& x, const Eigen::VectorXd& N) {
                          const double a = penalty.alpha_weighted ? model.grid().alpha(voxel) : 1.0;
                          const double wb = penalty.beta * a * w;
                          auto [it, _] = blocks.try_emplace(cell, Eigen::MatrixXd::Zero(nm, nm));
                          it->second.noalias() += wb * N * N.transpose();
                          const Eigen::Vector3d u_hat =
                              pf.prescribed ? pf.prescribed(x) : Eigen::Vector3d::Zero();
                          const auto dofs = mesh.cell_dofs(cell);
                          for (int comp = 0; comp < 3; ++comp) {
                            if (!pf.components[comp] || u_hat[comp] == 0.0) continue;
                            for (int l = 0; l < nm; ++l) rhs[dofs[3 * l + comp]] += wb * N[l] * u_hat[comp];
                          }
                        });
    for (auto& [cell, M] : blocks) {
      op.add_boundary_block({static_cast<std::int32_t>(cell), std::move(M), pf.components});
    }
  }
}

Eigen::VectorXd load_vector(const FcmModel& model, const LoadSpec& loads) {
  const auto& mesh = model.mesh();
  const auto& pat = model.patterns();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.dof_count()));
  const int nm = mesh.modes_per_cell();
  if (!loads.body_force.isZero(0.0)) {
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
      const auto& L = pat.load_integral[pat.cell_pattern[c]];
      const auto dofs = mesh.cell_dofs(c);
      for (int l = 0; l < nm; ++l) {
        for (int comp = 0; comp < 3; ++comp) f[dofs[3 * l + comp]] += L[l] * loads.body_force[comp];
      }
    }
  }
  for (const auto& t : loads.tractions) {
    if (t.traction.isZero(0.0)) continue;
    for_each_face_point(model, t.face,
                        [&](std::size_t cell, std::size_t voxel, double w, const Eigen::Vector3d&,
                            const Eigen::VectorXd& N) {
                          const double a = t.alpha_weighted ? model.grid().alpha(voxel) : 1.0;
                          const auto dofs = mesh.cell_dofs(cell);
                          for (int l = 0; l < nm; ++l) {
                            for (int comp = 0; comp < 3; ++comp) {
                              f[dofs[3 * l + comp]] += a * w * N[l] * t.traction[comp];
                            }
                          }
                        });
  }
  return f;
}

AssembledSystem assemble_system(const FcmModel& model, const PenaltyConfig& penalty,
                                const LoadSpec& loads) {
  AssembledSystem sys{FcmOperator(model.mesh(), model.shared_patterns()),
                      load_vector(model, loads), {}};
  add_penalty(model, penalty, sys.op, sys.rhs);
  if (penalty.faces.empty()) {
    sys.warnings.emplace_back(
        "no Dirichlet data: the stiffness operator is singular (rigid-body modes are free)");
  }
  return sys;
}

// --- fields on the vertex modes ----------------------------------------------

Eigen::VectorXd affine_field(const CellMesh& mesh, const Vector6& eps) {
  const Eigen::Matrix3d E = strain_tensor(eps);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.dof_count()));
  for (std::int32_t s = 0; s < static_cast<std::int32_t>(mesh.scalar_mode_count()); ++s) {
    const Int3 g = mesh.position_of(s);
    if (mesh.kind(g) != ModeKind::kVertex) continue;
    const Eigen::Vector3d x(mesh.vertex_coordinate(0, g[0]), mesh.vertex_coordinate(1, g[1]),
                            mesh.vertex_coordinate(2, g[2]));
    u.segment<3>(3 * s) = E * x;
  }
  return u;
}

Eigen::MatrixXd rigid_body_modes(const CellMesh& mesh, std::span<const int> modes) {
  const auto n = static_cast<Eigen::Index>(mesh.dof_count());
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(modes.size()));
  const auto ext = mesh.extent();
  const Eigen::Vector3d centre(0.5 * ext[0], 0.5 * ext[1], 0.5 * ext[2]);
  for (std::int32_t s = 0; s < static_cast<std::int32_t>(mesh.scalar_mode_count()); ++s) {
    const Int3 g = mesh.position_of(s);
    if (mesh.kind(g) != ModeKind::kVertex) continue;
    const Eigen::Vector3d x = Eigen::Vector3d(mesh.vertex_coordinate(0, g[0]),
                                              mesh.vertex_coordinate(1, g[1]),
                                              mesh.vertex_coordinate(2, g[2])) -
                              centre;
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const int mode = modes[m];
      if (mode < 0 || mode > 5) throw Error("rigid-body mode index must lie in [0, 5]");
      Eigen::Vector3d u = Eigen::Vector3d::Zero();
      if (mode < 3) {
        u[mode] = 1.0;
      } else {
        u = Eigen::Vector3d::Unit(mode - 3).cross(x);
      }
      R.block<3, 1>(3 * s, static_cast<Eigen::Index>(m)) = u;
    }
  }
  // Modified Gram-Schmidt, twice for stability.
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index j = 0; j < R.cols(); ++j) {
      for (Eigen::Index i = 0; i < j; ++i) R.col(j) -= R.col(i).dot(R.col(j)) * R.col(i);
      R.col(j).normalize();
    }
  }
  return R;
}

double balanced_low_rank_weight(const Eigen::VectorXd& diag, const Eigen::MatrixXd& R) {
  if (diag.size() != R.rows() || R.cols() == 0) throw Error("low-rank basis does not match the diagonal");
  double s = 0.0;
  for (Eigen::Index i = 0; i < R.rows(); ++i) {
    if (diag[i] > 0.0) s += R.row(i).squaredNorm() / diag[i];
  }
  if (!(s > 0.0)) throw Error("operator diagonal has no positive entries");
  return static_cast<double>(R.cols()) / s;
}

double strain_energy(const FcmModel& model, const Eigen::VectorXd& u) {
  const auto& mesh = model.mesh();
  const auto& pat = model.patterns();
  const int nd = mesh.dofs_per_cell();
  Eigen::VectorXd ul(nd);
  double energy = 0.0;
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    const auto dofs = mesh.cell_dofs(c);
    for (int i = 0; i < nd; ++i) ul[i] = u[dofs[i]];
    energy += 0.5 * ul.dot(pat.stiffness[pat.cell_pattern[c]] * ul);
  }
  return energy;
}

}  // namespace voxcell
