#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "voxcell/dns.hpp"
#include "voxcell/homogenization.hpp"
#include "voxcell/solver.hpp"

namespace voxcell {

using Json = nlohmann::ordered_json;

const char* version() noexcept;

Json to_json(const SolverReport& r);
Json to_json(const Matrix6& m);

/// Single-RVE result: bc, C_star, E_dir, hill_mandel_residual, solver, ...
Json to_json(const EffectiveTensor& t);
Json to_json(const EnsembleStats& s, BcKind bc);
Json to_json(const TensileResult& r, const TensileSetup& setup);
Json to_json(const ConvergenceStudy& s, double phi);
Json to_json(const std::vector<SweepRow>& rows, const SweepResolution& res);

/// Run manifest: tool, version, command and config echo. Wall time and
/// timestamp live under "runtime", the only non-deterministic part.
Json make_manifest(const std::string& command, const Json& config, double wall_time_s, int threads);

/// Pretty-printed JSON with a trailing newline.
void write_report(const Json& doc, const std::filesystem::path& path);

/// Columns: phi, E_star_MPa, dofs, p, voxels_per_cell, solver_iters.
void write_sweep_csv(const std::vector<SweepRow>& rows, const SweepResolution& res,
                     const std::filesystem::path& path);
void write_convergence_csv(const ConvergenceStudy& s, double phi, const std::filesystem::path& path);

}  // namespace voxcell
