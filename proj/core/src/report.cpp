#include "voxcell/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "voxcell/error.hpp"

#ifndef VOXCELL_VERSION
#define VOXCELL_VERSION "unknown"
#endif

namespace voxcell {
namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string vpc_string(const Int3& v) {
  return std::to_string(v[0]) + "x" + std::to_string(v[1]) + "x" + std::to_string(v[2]);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

std::string csv_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

const char* version() noexcept { return VOXCELL_VERSION; }

Json to_json(const SolverReport& r) {
  Json j;
  j["iterations"] = r.iterations;
  j["relative_residual"] = r.relative_residual;
  j["converged"] = r.converged;
  j["preconditioner"] = to_string(r.preconditioner);
  return j;
}

Json to_json(const Matrix6& m) {
  Json rows = Json::array();
  for (int i = 0; i < 6; ++i) {
    Json row = Json::array();
    for (int k = 0; k < 6; ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const EffectiveTensor& t) {
  Json j;
  j["bc"] = to_string(t.bc);
  j["C_star"] = to_json(t.C_star);
  Json e = Json::array();
  try {
    const Eigen::Vector3d E = directional_modulus(t.C_star);
    e = {E[0], E[1], E[2]};
  } catch (const Error&) {
    e = {nullptr, nullptr, nullptr};
  }
  j["E_dir"] = e;
  std::optional<double> worst;
  Json per_case = Json::array();
  for (const auto& h : t.hill_mandel) {
    per_case.push_back(optional_number(h));
    if (h) worst = worst ? std::max(*worst, *h) : *h;
  }
  j["hill_mandel_residual"] = optional_number(worst);
  Json solver = Json::array();
  for (const auto& r : t.solver) solver.push_back(to_json(r));
  j["solver"] = solver;
  j["rve_id"] = t.rve_id;
  j["asymmetry"] = t.asymmetry;
  j["dofs"] = t.dofs;
  j["hill_mandel_per_case"] = per_case;
  return j;
}

Json to_json(const EnsembleStats& s, BcKind bc) {
  Json j;
  j["bc"] = to_string(bc);
  j["n"] = s.n;
  j["E_mean"] = s.n ? Json{s.mean[0], s.mean[1], s.mean[2]} : Json::array();
  j["E_std"] = s.n ? Json{s.std_dev[0], s.std_dev[1], s.std_dev[2]} : Json::array();
  j["single_sample"] = s.single_sample;
  Json cells = Json::array();
  for (const auto& t : s.tensors) cells.push_back(to_json(t));
  j["cells"] = cells;
  Json failures = Json::array();
  for (const auto& f : s.failures) failures.push_back({{"index", f.index}, {"message", f.message}});
  j["failures"] = failures;
  return j;
}

Json to_json(const TensileResult& r, const TensileSetup& setup) {
  Json j;
  j["E_star_MPa"] = r.E_star;
  j["stress_MPa"] = r.stress;
  j["gage_strain"] = r.gage_strain;
  j["reaction_N"] = r.reaction;
  j["penalty_reaction_N"] = r.penalty_reaction;
  j["area_mm2"] = r.area_mm2;
  j["gage_length_mm"] = r.gage_length_mm;
  j["pull_axis"] = setup.pull_axis;
  j["grips"] = to_string(setup.grips);
  j["dofs"] = r.dofs;
  j["solver"] = to_json(r.report);
  j["warnings"] = r.warnings;
  return j;
}

Json to_json(const ConvergenceStudy& s, double phi) {
  Json rows = Json::array();
  for (const auto& r : s.rows) {
    Json row;
    row["phi"] = phi;
    row["E_star_MPa"] = optional_number(r.E_star);
    row["dofs"] = r.dofs;
    row["p"] = r.disc.degree;
    row["voxels_per_cell"] = vpc_string(r.disc.voxels_per_cell);
    row["solver_iters"] = r.iterations;
    row["rel_error"] = optional_number(r.rel_error);
    row["error"] = r.error;
    rows.push_back(row);
  }
  Json j;
  j["reference"] = s.reference ? Json(*s.reference) : Json(nullptr);
  j["rows"] = rows;
  return j;
}

Json to_json(const std::vector<SweepRow>& rows, const SweepResolution& res) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row;
    row["increment_mm"] = r.increment_mm;
    row["d_horizontal_mm"] = r.d_horizontal_mm;
    row["d_inclined_mm"] = r.d_inclined_mm;
    row["phi"] = r.phi;
    row["E_star_MPa"] = optional_number(r.E_star);
    row["E_dir"] = r.E_star ? Json{r.E_dir[0], r.E_dir[1], r.E_dir[2]} : Json::array();
    row["dofs"] = r.dofs;
    row["p"] = res.disc.degree;
    row["voxels_per_cell"] = vpc_string(res.disc.voxels_per_cell);
    row["solver_iters"] = r.iterations;
    row["error"] = r.error;
    out.push_back(row);
  }
  return out;
}

Json make_manifest(const std::string& command, const Json& config, double wall_time_s, int threads) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  Json j;
  j["tool"] = "voxcell";
  j["version"] = version();
  j["command"] = command;
  j["config"] = config;
  j["runtime"] = {{"timestamp", stamp}, {"wall_time_s", wall_time_s}, {"threads", threads}};
  return j;
}

void write_report(const Json& doc, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const SweepResolution& res,
                     const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "phi,E_star_MPa,dofs,p,voxels_per_cell,solver_iters\n";
  for (const auto& r : rows) {
    out << csv_num(r.phi) << ',' << (r.E_star ? csv_num(*r.E_star) : "") << ',' << r.dofs << ','
        << res.disc.degree << ',' << vpc_string(res.disc.voxels_per_cell) << ',' << r.iterations
        << '\n';
  }
}

void write_convergence_csv(const ConvergenceStudy& s, double phi, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "phi,E_star_MPa,dofs,p,voxels_per_cell,solver_iters\n";
  for (const auto& r : s.rows) {
    out << csv_num(phi) << ',' << (r.E_star ? csv_num(*r.E_star) : "") << ',' << r.dofs << ','
        << r.disc.degree << ',' << vpc_string(r.disc.voxels_per_cell) << ',' << r.iterations << '\n';
  }
}

}  // namespace voxcell
