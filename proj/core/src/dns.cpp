#include "voxcell/dns.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "voxcell/error.hpp"
#include "voxcell/fields.hpp"

namespace voxcell {

const char* to_string(GripMode g) noexcept { return g == GripMode::kAxial ? "axial" : "full"; }

GripMode parse_grip_mode(const std::string& s) {
  if (s == "axial") return GripMode::kAxial;
  if (s == "full") return GripMode::kFull;
  throw Error("unknown grip mode '" + s + "' (expected axial|full)");
}

void TensileSetup::validate() const {
  if (pull_axis < 0 || pull_axis > 2) throw Error("pull axis must be 0, 1 or 2");
  if (displacement_mm == 0.0 || !std::isfinite(displacement_mm)) {
    throw Error("pull displacement must be finite and non-zero");
  }
  if (!(gage_begin >= 0.0 && gage_begin < gage_end && gage_end <= 1.0)) {
    throw Error("gage region must satisfy 0 <= begin < end <= 1");
  }
  if (area_mm2 && !(*area_mm2 > 0.0)) throw Error("cross-section area must be positive");
  if (!(penalty_factor > 0.0)) throw Error("penalty factor must be positive");
  solver.validate();
}

double plane_mean_displacement(const FcmModel& model, const Eigen::VectorXd& u, int axis, double s) {
  const auto& g = model.grid();
  const int t1 = (axis + 1) % 3, t2 = (axis + 2) % 3;
  const auto dims = g.dims();
  const auto h = g.spacing();
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(static_cast<std::size_t>(dims[t1]) * dims[t2]);
  for (int j = 0; j < dims[t2]; ++j) {
    for (int i = 0; i < dims[t1]; ++i) {
      Eigen::Vector3d x;
      x[axis] = s;
      x[t1] = (i + 0.5) * h[t1];
      x[t2] = (j + 0.5) * h[t2];
      pts.push_back(x);
    }
  }
  const auto samples = evaluate_fields(model, u, pts);
  double sum_mat = 0.0, sum_all = 0.0;
  std::size_t n_mat = 0;
  for (const auto& f : samples) {
    sum_all += f.displacement[axis];
    if (f.alpha == 1.0) {
      sum_mat += f.displacement[axis];
      ++n_mat;
    }
  }
  return n_mat > 0 ? sum_mat / static_cast<double>(n_mat)
                   : sum_all / static_cast<double>(samples.size());
}

TensileResult tensile_test(const FcmModel& model, const TensileSetup& setup) {
  setup.validate();
  const auto& mesh = model.mesh();
  const int a = setup.pull_axis;
  const auto ext = mesh.extent();
  const double L = ext[a];
  const double delta = setup.displacement_mm;

  PenaltyConfig pen;
  pen.beta = PenaltyConfig::default_beta(model, setup.penalty_factor);
  std::array<bool, 3> comps{true, true, true};
  if (setup.grips == GripMode::kAxial) comps = {a == 0, a == 1, a == 2};
  pen.faces.push_back({{a, false}, nullptr, comps});
  pen.faces.push_back({{a, true}, [a, delta](const Eigen::Vector3d&) {
                         return Eigen::Vector3d(delta * Eigen::Vector3d::Unit(a));
                       },
                       comps});
  AssembledSystem sys = assemble_system(model, pen, LoadSpec{});
  if (setup.grips == GripMode::kAxial) {
    const std::array<int, 3> modes{(a + 1) % 3, (a + 2) % 3, 3 + a};
    Eigen::MatrixXd R = rigid_body_modes(mesh, modes);
    const double kappa = balanced_low_rank_weight(sys.op.diagonal(), R);
    sys.op.set_low_rank(std::move(R), kappa);
  }

  // Lift the boundary data with the axial ramp so the iteration only has to
  // resolve the fluctuation, whose load is on the scale of the stiffness
  // rather than of the penalty.
  Vector6 ramp_strain = Vector6::Zero();
  ramp_strain[a] = delta / L;
  const Eigen::VectorXd lift = affine_field(mesh, ramp_strain);
  const Eigen::VectorXd r0 = sys.rhs - sys.op * lift;
  SolveResult res = solve_cg(sys.op, r0, setup.solver);

  TensileResult out;
  out.report = res.report;
  out.dofs = sys.op.size();
  out.warnings = sys.warnings;
  out.solution = lift + res.solution;
  if (!res.report.converged) {
    out.warnings.push_back("solver did not converge: relative residual " +
                           std::to_string(res.report.relative_residual));
  }
  const Eigen::VectorXd& u = out.solution;

  out.area_mm2 = setup.area_mm2 ? *setup.area_mm2 : mesh.volume() / L;
  out.reaction = average_stress(model, u)[a] * mesh.volume() / L;
  out.stress = out.reaction / out.area_mm2;

  const int nm = mesh.modes_per_cell();
  double pr = 0.0;
  for_each_face_point(model, {a, true},
                      [&](std::size_t cell, std::size_t voxel, double w, const Eigen::Vector3d&,
                          const Eigen::VectorXd& N) {
                        const auto dofs = mesh.cell_dofs(cell);
                        double ua = 0.0;
                        for (int l = 0; l < nm; ++l) ua += N[l] * u[dofs[3 * l + a]];
                        pr += pen.beta * model.grid().alpha(voxel) * w * (delta - ua);
                      });
  out.penalty_reaction = pr;

  const double z1 = setup.gage_begin * L, z2 = setup.gage_end * L;
  out.gage_length_mm = z2 - z1;
  out.gage_strain =
      (plane_mean_displacement(model, u, a, z2) - plane_mean_displacement(model, u, a, z1)) /
      out.gage_length_mm;
  if (out.gage_strain == 0.0 || !std::isfinite(out.gage_strain)) {
    throw Error("gage strain is zero or not finite; the modulus is undefined");
  }
  out.E_star = out.stress / out.gage_strain;
  return out;
}

ConvergenceStudy convergence_study(const VoxelGrid& grid, const ElasticMaterial& material,
                                   const TensileSetup& setup,
                                   const std::vector<Discretization>& variants) {
  if (variants.size() < 2) throw Error("a convergence study needs at least two variants");
  ConvergenceStudy study;
  for (const auto& v : variants) {
    ConvergenceRow row;
    row.disc = v;
    try {
      const FcmModel model(grid, v.voxels_per_cell, v.degree, material);
      row.dofs = model.mesh().dof_count();
      const TensileResult r = tensile_test(model, setup);
      row.iterations = r.report.iterations;
      if (!r.report.converged) {
        row.error = "solver did not converge (relative residual " +
                    std::to_string(r.report.relative_residual) + ")";
      } else {
        row.E_star = r.E_star;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    study.rows.push_back(std::move(row));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < study.rows.size(); ++i) {
    if (study.rows[i].dofs > study.rows[best].dofs) best = i;
  }
  study.reference = best;
  if (const auto ref = study.rows[best].E_star) {
    for (auto& row : study.rows) {
      if (row.E_star) row.rel_error = std::abs(*row.E_star - *ref) / std::abs(*ref);
    }
  }
  return study;
}

std::vector<SweepRow> porosity_sweep(const OctetCellSpec& base, const std::vector<double>& increments_mm,
                                     const SweepResolution& resolution, const ElasticMaterial& material,
                                     int axis, const SolverConfig& solver) {
  if (axis < 0 || axis > 2) throw Error("sweep axis must be 0, 1 or 2");
  const double nd = base.cell_size_mm / resolution.spacing_mm;
  const int n = static_cast<int>(std::lround(nd));
  if (n < 1 || std::abs(nd - n) > 1e-9 * nd) {
    throw Error("voxel spacing must divide the cell size");
  }
  const double h = base.cell_size_mm / n;
  std::vector<SweepRow> rows;
  std::shared_ptr<const VoxelKernelTable> kernels;
  for (const double inc : increments_mm) {
    SweepRow row;
    row.increment_mm = inc;
    row.d_horizontal_mm = base.d_horizontal_mm + inc;
    row.d_inclined_mm = base.d_inclined_mm + inc;
    try {
      OctetCellSpec spec = base;
      spec.d_horizontal_mm = row.d_horizontal_mm;
      spec.d_inclined_mm = row.d_inclined_mm;
      const VoxelGrid grid = voxelize(octet_solid(spec), {n, n, n}, {h, h, h}, resolution.supersample);
      row.phi = porosity(grid);
      const FcmModel model = kernels ? FcmModel(grid, resolution.disc.voxels_per_cell,
                                                resolution.disc.degree, material, kernels)
                                     : FcmModel(grid, resolution.disc.voxels_per_cell,
                                                resolution.disc.degree, material);
      kernels = model.shared_kernels();
      HomogenizationOptions opts;
      opts.solver = solver;
      opts.rve_id = "sweep+" + std::to_string(inc);
      const EffectiveTensor t = effective_tensor(model, BcKind::kPbc, opts);
      row.dofs = t.dofs;
      for (const auto& r : t.solver) row.iterations += r.iterations;
      row.E_dir = directional_modulus(t.C_star);
      row.E_star = row.E_dir[axis];
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double interpolate_modulus(const std::vector<SweepRow>& rows, double phi) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    if (r.E_star) pts.emplace_back(r.phi, *r.E_star);
  }
  std::sort(pts.begin(), pts.end());
  if (pts.empty() || phi < pts.front().first || phi > pts.back().first) {
    throw DomainError("porosity lies outside the sweep range");
  }
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const auto& [p0, e0] = pts[i - 1];
    const auto& [p1, e1] = pts[i];
    if (phi <= p1) {
      if (p1 == p0) return 0.5 * (e0 + e1);
      return e0 + (e1 - e0) * (phi - p0) / (p1 - p0);
    }
  }
  return pts.back().second;
}

}  // namespace voxcell
