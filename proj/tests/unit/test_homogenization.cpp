#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "voxcell/error.hpp"
#include "voxcell/fields.hpp"
#include "voxcell/homogenization.hpp"
#include "voxcell/lattice.hpp"

using namespace voxcell;

namespace {

const ElasticMaterial kSteel(190000.0, 0.3);

double rel(const Matrix6& a, const Matrix6& b) { return (a - b).norm() / b.norm(); }

Vector6 unit(int j) { return Vector6::Unit(j); }

VoxelGrid laminate_grid() {
  // Layers normal to z, phase 2 carried by alpha = 0.01 (contrast 100).
  VoxelGrid g({2, 2, 4}, {0.25, 0.25, 0.25}, 0.01);
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) g.set_material(i, j, k, true);
  return g;
}

VoxelGrid coarse_octet() {
  return voxelize(octet_solid({}), {10, 10, 10}, {0.4, 0.4, 0.4}, 2);
}

HomogenizationOptions tight() {
  HomogenizationOptions o;
  o.solver.rel_tolerance = 1e-12;
  return o;
}

}  // namespace

TEST(ConstrainPbc, ReducedSizeMatchesEnumeration) {
  for (int p = 1; p <= 3; ++p) {
    const CellMesh mesh({2, 1, 1}, {1, 1, 1}, {1, 1, 1}, p);
    const auto space = constrain_pbc(mesh, Vector6::Zero());
    const Int3 period{2 * p, p, p};
    std::set<std::array<int, 3>> unique;
    for (int z = 0; z < mesh.positions()[2]; ++z)
      for (int y = 0; y < mesh.positions()[1]; ++y)
        for (int x = 0; x < mesh.positions()[0]; ++x)
          unique.insert({x % period[0], y % period[1], z % period[2]});
    const auto paired = mesh.scalar_mode_count() - unique.size();
    EXPECT_EQ(static_cast<std::size_t>(space.reduced_size), mesh.dof_count() - 3 * paired - 3) << p;
  }
}

TEST(ConstrainPbc, ZeroStrainOnSolidGivesZeroField) {
  const FcmModel model(VoxelGrid::solid({4, 4, 4}, {0.25, 0.25, 0.25}), {2, 2, 2}, 2, kSteel);
  auto prob = make_constrained_problem(model, constrain_pbc(model.mesh(), Vector6::Zero()));
  EXPECT_EQ(prob.rhs.norm(), 0.0);
  const auto r = solve_cg(prob.op, prob.rhs, {});
  EXPECT_EQ(prob.expand(r.solution).norm(), 0.0);
}

TEST(ConstrainPbc, UniaxialStrainOnSolidIsExactlyAffine) {
  const FcmModel model(VoxelGrid::solid({4, 4, 4}, {0.25, 0.25, 0.25}), {2, 2, 2}, 3, kSteel);
  const Vector6 e = unit(0);
  auto prob = make_constrained_problem(model, constrain_pbc(model.mesh(), e));
  SolverConfig cfg;
  cfg.rel_tolerance = 1e-14;
  const auto r = solve_cg(prob.op, prob.rhs, cfg);
  const Eigen::VectorXd u = prob.expand(r.solution);
  EXPECT_LT((u - affine_field(model.mesh(), e)).norm(), 1e-12);
}

TEST(ConstrainKubc, ZeroStrainGivesZeroSolution) {
  const FcmModel model(coarse_octet(), {2, 2, 2}, 2, kSteel);
  auto prob = make_constrained_problem(model, constrain_kubc(model.mesh(), Vector6::Zero()));
  EXPECT_EQ(prob.rhs.norm(), 0.0);
}

TEST(ConstrainSubc, ZeroStressGivesZeroSolution) {
  const FcmModel model(coarse_octet(), {2, 2, 2}, 2, kSteel);
  auto prob = constrain_subc(model, Vector6::Zero());
  EXPECT_EQ(prob.rhs.norm(), 0.0);
  EXPECT_EQ(solve_cg(prob.op, prob.rhs, {}).solution.norm(), 0.0);
}

class SolidRecovery : public ::testing::TestWithParam<std::tuple<BcKind, int>> {};

TEST_P(SolidRecovery, RecoversIsotropicStiffness) {
  const auto [bc, p] = GetParam();
  const FcmModel model(VoxelGrid::solid({8, 8, 8}, {0.125, 0.125, 0.125}), {4, 4, 4}, p, kSteel);
  const auto t = effective_tensor(model, bc, tight());
  EXPECT_LT(rel(t.C_star, oracle::isotropic(190000.0, 0.3)), 1e-8);
  for (int j = 0; j < 6; ++j) {
    ASSERT_TRUE(t.hill_mandel[j].has_value());
    EXPECT_LE(*t.hill_mandel[j], 1e-12);
    EXPECT_TRUE(t.solver[j].converged);
  }
}

INSTANTIATE_TEST_SUITE_P(AllBc, SolidRecovery,
                         ::testing::Combine(::testing::Values(BcKind::kPbc, BcKind::kKubc,
                                                              BcKind::kSubc),
                                            ::testing::Values(1, 2)));

TEST(EffectiveTensor, FullyVoidScalesWithAlpha) {
  const VoxelGrid g({4, 4, 4}, {0.25, 0.25, 0.25});
  const FcmModel model(g, {2, 2, 2}, 1, kSteel);
  const auto t = effective_tensor(model, BcKind::kPbc, tight());
  EXPECT_LT(rel(t.C_star, g.alpha_void() * kSteel.stiffness()), 1e-8);
}

TEST(EffectiveTensor, LaminateMatchesClosedForm) {
  const auto g = laminate_grid();
  const FcmModel model(g, {1, 1, 1}, 1, kSteel);
  const Matrix6 C1 = kSteel.stiffness();
  const Matrix6 ref = oracle::laminate(C1, 0.01 * C1, 0.5);
  const auto pbc = effective_tensor(model, BcKind::kPbc, tight());
  EXPECT_LT(rel(pbc.C_star, ref), 1e-4);
  const auto kubc = effective_tensor(model, BcKind::kKubc, tight());
  const auto subc = effective_tensor(model, BcKind::kSubc, tight());
  const auto ord = bound_ordering_check(kubc.C_star, pbc.C_star, subc.C_star, 1e-3);
  EXPECT_TRUE(ord.pass) << ord.min_eig_kubc_pbc << " " << ord.min_eig_pbc_subc;
  for (const auto* t : {&pbc, &kubc}) {
    for (const auto& hm : t->hill_mandel) EXPECT_LE(hm.value(), 1e-6);
  }
  // Layers normal to z: the normal stiffness is far below the in-plane one.
  EXPECT_LT(pbc.C_star(2, 2), 0.1 * pbc.C_star(0, 0));
}

TEST(EffectiveTensor, OctetCellInvariants) {
  const FcmModel model(coarse_octet(), {2, 2, 2}, 2, kSteel);
  const auto opts = tight();
  const auto pbc = effective_tensor(model, BcKind::kPbc, opts);
  const auto kubc = effective_tensor(model, BcKind::kKubc, opts);
  const auto subc = effective_tensor(model, BcKind::kSubc, opts);
  for (const auto* t : {&pbc, &kubc, &subc}) {
    EXPECT_LE(t->asymmetry, 1e-6) << to_string(t->bc);
    Eigen::SelfAdjointEigenSolver<Matrix6> es(t->C_star);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8 * t->C_star.norm());
  }
  for (const auto* t : {&pbc, &kubc})
    for (const auto& hm : t->hill_mandel) EXPECT_LE(hm.value(), 1e-6) << to_string(t->bc);

  const auto ord = bound_ordering_check(kubc.C_star, pbc.C_star, subc.C_star, 1e-3);
  EXPECT_TRUE(ord.pass);
  EXPECT_FALSE(bound_ordering_check(pbc.C_star, kubc.C_star, subc.C_star, 1e-3).pass);

  // Shear rows decouple from everything but their own diagonal.
  const Matrix6& C = pbc.C_star;
  for (int i = 3; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i != j) EXPECT_LT(std::abs(C(i, j)), 1e-6 * std::sqrt(C(i, i) * C(j, j))) << i << j;
}

TEST(EffectiveTensor, PbcAverageStrainEqualsMacroStrain) {
  const FcmModel model(coarse_octet(), {2, 2, 2}, 2, kSteel);
  for (int j = 0; j < 6; ++j) {
    auto prob = make_constrained_problem(model, constrain_pbc(model.mesh(), unit(j)));
    const auto r = solve_cg(prob.op, prob.rhs, {});
    EXPECT_LT((average_strain(model, prob.expand(r.solution)) - unit(j)).norm(), 1e-10);
  }
}

TEST(EffectiveTensor, ScalesLinearlyWithModulus) {
  const FcmModel a(coarse_octet(), {2, 2, 2}, 1, kSteel);
  const FcmModel b(coarse_octet(), {2, 2, 2}, 1, ElasticMaterial(3.7 * 190000.0, 0.3));
  const auto ta = effective_tensor(a, BcKind::kPbc, tight());
  const auto tb = effective_tensor(b, BcKind::kPbc, tight());
  EXPECT_LT(rel(tb.C_star, 3.7 * ta.C_star), 1e-8);
}

TEST(EffectiveTensor, RotationEquivariance) {
  // Build axis y makes x and y inequivalent, so the rotation is not trivial.
  const auto g = coarse_octet();
  const auto gr = oracle::rotate_z90(g);
  const FcmModel a(g, {2, 2, 2}, 1, kSteel);
  const FcmModel b(gr, {2, 2, 2}, 1, kSteel);
  Eigen::Matrix3d R;
  R << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  for (BcKind bc : {BcKind::kPbc, BcKind::kKubc}) {
    const auto ta = effective_tensor(a, bc, tight());
    const auto tb = effective_tensor(b, bc, tight());
    EXPECT_GT(std::abs(ta.C_star(0, 0) - ta.C_star(1, 1)), 1e-3 * ta.C_star(0, 0));
    EXPECT_LT(rel(tb.C_star, oracle::rotate(ta.C_star, R)), 1e-8);
  }
}

TEST(EffectiveTensor, NonConvergenceNamesLoadCase) {
  const FcmModel model(coarse_octet(), {2, 2, 2}, 2, kSteel);
  HomogenizationOptions o;
  o.solver.max_iterations = 2;
  try {
    effective_tensor(model, BcKind::kPbc, o);
    FAIL();
  } catch (const LoadCaseError& e) {
    EXPECT_EQ(e.load_case(), 0);
  }
}

TEST(Averages, AffineStateGivesStrainAndStress) {
  const FcmModel model(VoxelGrid::solid({4, 4, 4}, {0.25, 0.25, 0.25}), {2, 2, 2}, 2, kSteel);
  Vector6 e;
  e << 1e-3, 2e-4, -5e-4, 3e-4, 1e-4, -2e-4;
  const Eigen::VectorXd u = affine_field(model.mesh(), e);
  EXPECT_LT((average_strain(model, u) - e).norm(), 1e-15);
  EXPECT_LT((average_stress(model, u) - kSteel.stiffness() * e).norm(), 1e-10);
  EXPECT_LE(hill_mandel_residual(model, u).value(), 1e-12);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(u.size());
  EXPECT_EQ(average_stress(model, zero).norm(), 0.0);
  EXPECT_FALSE(hill_mandel_residual(model, zero).has_value());
}

namespace {

// Tensor-product Gauss rule over one box face, voxel by voxel.
template <class Fn>
void integrate_face(const FcmModel& model, int axis, bool upper, int q, Fn&& fn) {
  std::vector<double> gx, gw;
  oracle::gauss_golub_welsch(q, gx, gw);
  const auto& g = model.grid();
  const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
  const double h1 = g.spacing()[a1], h2 = g.spacing()[a2];
  for (int i2 = 0; i2 < g.dims()[a2]; ++i2)
    for (int i1 = 0; i1 < g.dims()[a1]; ++i1)
      for (int q2 = 0; q2 < q; ++q2)
        for (int q1 = 0; q1 < q; ++q1) {
          Eigen::Vector3d x;
          x(axis) = upper ? g.extent()[axis] : 0.0;
          x(a1) = h1 * (i1 + 0.5 * (1 + gx[q1]));
          x(a2) = h2 * (i2 + 0.5 * (1 + gx[q2]));
          fn(x, 0.25 * h1 * h2 * gw[q1] * gw[q2]);
        }
}

}  // namespace

TEST(Averages, StrainEqualsBoundaryIntegral) {
  VoxelGrid g({4, 4, 4}, {0.25, 0.25, 0.25});
  for (std::size_t n = 0; n < g.size(); n += 3) g.set_material(n, true);
  const FcmModel model(g, {2, 2, 2}, 2, kSteel);
  Eigen::VectorXd u(static_cast<Eigen::Index>(model.mesh().dof_count()));
  for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = 1e-3 * std::sin(0.37 * i);
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  for (int axis = 0; axis < 3; ++axis)
    for (bool upper : {false, true}) {
      Eigen::Vector3d n = Eigen::Vector3d::Zero();
      n(axis) = upper ? 1.0 : -1.0;
      integrate_face(model, axis, upper, 4, [&](const Eigen::Vector3d& x, double w) {
        const Eigen::Vector3d ux = evaluate_point(model, u, x).displacement;
        M += w * 0.5 * (ux * n.transpose() + n * ux.transpose());
      });
    }
  const Vector6 ref = voigt_strain(M / model.mesh().volume());
  EXPECT_LT((average_strain(model, u) - ref).norm(), 1e-8 * ref.norm());
}

TEST(Averages, StressEqualsBoundaryIntegralOnSolvedSolid) {
  // Bar clamped at z=0 by penalty and loaded by a traction at z=L. The
  // boundary traction includes the penalty reaction beta (0 - u).
  const FcmModel model(VoxelGrid::solid({2, 2, 4}, {0.25, 0.25, 0.25}), {1, 1, 2}, 2, kSteel);
  PenaltyConfig pen;
  pen.beta = PenaltyConfig::default_beta(model, 1e2);
  PenaltyFace bottom;
  bottom.face = {2, false};
  bottom.prescribed = [](const Eigen::Vector3d&) { return Eigen::Vector3d::Zero().eval(); };
  pen.faces.push_back(bottom);
  const Eigen::Vector3d t(0.5, -0.2, 10.0);
  LoadSpec loads;
  loads.tractions.push_back({{2, true}, t, false});
  const auto sys = assemble_system(model, pen, loads);
  SolverConfig cfg;
  cfg.rel_tolerance = 1e-14;
  const Eigen::VectorXd u = solve_cg(sys.op, sys.rhs, cfg).solution;

  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  integrate_face(model, 2, true, 4, [&](const Eigen::Vector3d& x, double w) {
    M += w * t * x.transpose();
  });
  integrate_face(model, 2, false, 4, [&](const Eigen::Vector3d& x, double w) {
    const Eigen::Vector3d reaction = -pen.beta * evaluate_point(model, u, x).displacement;
    M += w * reaction * x.transpose();
  });
  const Vector6 ref = voigt_stress(0.5 * (M + M.transpose()) / model.mesh().volume());
  EXPECT_LT((average_stress(model, u) - ref).norm(), 1e-8 * ref.norm());
}

TEST(HillMandel, ClampedStretchIsInadmissible) {
  const FcmModel model(VoxelGrid::solid({4, 4, 4}, {0.25, 0.25, 0.25}), {2, 2, 2}, 2, kSteel);
  PenaltyConfig pen;
  pen.beta = PenaltyConfig::default_beta(model);
  PenaltyFace bottom, top;
  bottom.face = {2, false};
  bottom.prescribed = [](const Eigen::Vector3d&) { return Eigen::Vector3d::Zero().eval(); };
  top.face = {2, true};
  top.prescribed = [](const Eigen::Vector3d&) { return Eigen::Vector3d(0, 0, 1e-3); };
  pen.faces = {bottom, top};
  const auto sys = assemble_system(model, pen, {});
  const Eigen::VectorXd u = solve_cg(sys.op, sys.rhs, {}).solution;
  EXPECT_GT(hill_mandel_residual(model, u).value(), 1e-3);
}

TEST(DirectionalModulus, IsotropicAndDiagonal) {
  const Eigen::Vector3d e = directional_modulus(oracle::isotropic(1234.0, 0.2));
  EXPECT_LT((e - Eigen::Vector3d::Constant(1234.0)).norm(), 1e-9);
  Vector6 d;
  d << 1, 2, 3, 4, 5, 6;
  EXPECT_LT((directional_modulus(d.asDiagonal()) - Eigen::Vector3d(1, 2, 3)).norm(), 1e-14);
  Matrix6 singular = Matrix6::Identity();
  singular(2, 2) = 0.0;
  EXPECT_THROW(directional_modulus(singular), RankError);
}

TEST(DirectionalModulus, PrintedTwelveCellTensor) {
  Matrix6 C;
  C << 22665, 4967, 14366, -328, -66, 328,  //
      4967, 13396, 5968, -287, -65, -50,    //
      14366, 5968, 23035, -7, 84, 300,      //
      -328, -287, -7, 5351, -80, -9,        //
      -66, -65, 84, -80, 6280, 5,           //
      328, -50, 300, -9, 5, 13120;
  // Independent inversion: full-pivot LU on the transpose.
  const Matrix6 S = C.transpose().fullPivLu().inverse().transpose();
  const Eigen::Vector3d ref(1 / S(0, 0), 1 / S(1, 1), 1 / S(2, 2));
  const Eigen::Vector3d e = directional_modulus(C);
  EXPECT_LT((e - ref).norm(), 1e-9 * ref.norm());
  EXPECT_NEAR(e(2), 13267.2371879723, 1e-6);
  EXPECT_NEAR(e(0), 13554.6978153939, 1e-6);
  EXPECT_NEAR(e(1), 11721.9182523685, 1e-6);
}

TEST(BoundOrdering, EqualTensorsPass) {
  const Matrix6 C = oracle::isotropic(1.0, 0.3);
  const auto r = bound_ordering_check(C, C, C, 1e-3);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.min_eig_kubc_pbc, 0.0, 1e-15);
}

TEST(Ensemble, IdenticalCellsHaveZeroStd) {
  const std::vector<VoxelGrid> cells(3, coarse_octet());
  EnsembleOptions o;
  o.voxels_per_cell = {2, 2, 2};
  o.degree = 1;
  const auto s = ensemble_homogenize(cells, kSteel, BcKind::kPbc, o);
  EXPECT_EQ(s.n, 3u);
  EXPECT_TRUE(s.failures.empty());
  EXPECT_EQ(s.std_dev, Eigen::Vector3d::Zero());
  EXPECT_FALSE(s.single_sample);
  EXPECT_EQ(s.tensors[2].rve_id, "cell-2");
}

TEST(Ensemble, SingleCellFlagsConvention) {
  EnsembleOptions o;
  o.voxels_per_cell = {2, 2, 2};
  o.degree = 1;
  const auto s = ensemble_homogenize({coarse_octet()}, kSteel, BcKind::kPbc, o);
  EXPECT_EQ(s.n, 1u);
  EXPECT_TRUE(s.single_sample);
  EXPECT_EQ(s.std_dev, Eigen::Vector3d::Zero());
  EXPECT_EQ(s.mean, s.moduli[0]);
}

TEST(Ensemble, FailuresAreCollected) {
  EnsembleOptions o;
  o.voxels_per_cell = {2, 2, 2};
  o.degree = 1;
  const VoxelGrid odd({5, 5, 5}, {0.4, 0.4, 0.4});
  const auto s = ensemble_homogenize({coarse_octet(), odd, coarse_octet()}, kSteel, BcKind::kPbc, o);
  EXPECT_EQ(s.n, 2u);
  ASSERT_EQ(s.failures.size(), 1u);
  EXPECT_EQ(s.failures[0].index, 1u);
  EXPECT_EQ(s.tensors[1].rve_id, "cell-2");
}

TEST(Ensemble, EmptyInputGivesEmptyStats) {
  const auto s = ensemble_homogenize({}, kSteel, BcKind::kPbc);
  EXPECT_EQ(s.n, 0u);
  EXPECT_TRUE(s.failures.empty());
}

TEST(BcKind, Parsing) {
  EXPECT_EQ(parse_bc_kind("pbc"), BcKind::kPbc);
  EXPECT_EQ(parse_bc_kind(to_string(BcKind::kSubc)), BcKind::kSubc);
  EXPECT_THROW(parse_bc_kind("mixed"), Error);
}
