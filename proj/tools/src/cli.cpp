#include "voxcell_cli/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "voxcell/dns.hpp"
#include "voxcell/error.hpp"
#include "voxcell/homogenization.hpp"
#include "voxcell/lattice.hpp"
#include "voxcell/parallel.hpp"
#include "voxcell/report.hpp"
#include "voxcell/voxel_model.hpp"
#include "voxcell/vtk.hpp"

namespace voxcell::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid number '" + s + "' for " + what);
  }
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> v;
  for (const auto& p : split(s, ',')) v.push_back(parse_double(p, what));
  if (v.empty()) throw UsageError("empty list for " + what);
  return v;
}

/// "4" -> (4,4,4); "2,2,10" -> (2,2,10).
Int3 parse_int3(const std::string& s, const std::string& what) {
  const auto v = parse_list(s, what);
  if (v.size() != 1 && v.size() != 3) throw UsageError(what + " needs one or three integers");
  Int3 r{};
  for (int d = 0; d < 3; ++d) {
    const double x = v.size() == 1 ? v[0] : v[d];
    if (x != std::floor(x) || x < 1) throw UsageError(what + " entries must be positive integers");
    r[d] = static_cast<int>(x);
  }
  return r;
}

int parse_axis_index(const std::string& s) {
  if (s == "x") return 0;
  if (s == "y") return 1;
  if (s == "z") return 2;
  throw UsageError("axis must be x, y or z");
}

std::string dashed(std::string s) {
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

std::string config_key(const CLI::Option* opt) {
  std::string name = opt->get_lnames().empty() ? opt->get_name(true) : opt->get_lnames().front();
  std::replace(name.begin(), name.end(), '-', '_');
  return name;
}

bool skip_in_config(const CLI::Option* opt) {
  const std::string key = config_key(opt);
  return key == "help" || key == "config";
}

/// Typed echo of every option of a subcommand, the effective configuration.
Json echo_config(const CLI::App* sub) {
  Json cfg = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (skip_in_config(opt)) continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      value = r.empty() ? "true" : r.back();
    } else {
      value = opt->get_default_str();
      if (value.empty()) continue;
    }
    const std::string key = config_key(opt);
    if (opt->get_type_size() == 0) {
      cfg[key] = value == "true" || value == "1";
      continue;
    }
    char* end = nullptr;
    const double d = std::strtod(value.c_str(), &end);
    if (!value.empty() && end == value.c_str() + value.size() && value.find(',') == std::string::npos) {
      if (d == std::floor(d) && std::abs(d) < 1e15 && value.find_first_of(".eE") == std::string::npos) {
        cfg[key] = static_cast<long long>(d);
      } else {
        cfg[key] = d;
      }
    } else {
      cfg[key] = value;
    }
  }
  return cfg;
}

std::string json_token(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_array()) {
    std::string joined;
    for (const auto& e : v) joined += (joined.empty() ? "" : ",") + json_token(e);
    return joined;
  }
  if (v.is_number()) return v.dump();
  throw UsageError("unsupported config value " + v.dump());
}

std::vector<std::string> config_tokens_from(const CLI::App* sub, const Json& cfg) {
  if (!cfg.is_object()) throw UsageError("config must be a JSON object");
  std::vector<std::string> flags, positionals;
  for (const auto& [key, value] : cfg.items()) {
    const CLI::Option* opt = sub->get_option_no_throw("--" + dashed(key));
    if (!opt) opt = sub->get_option_no_throw(key);
    if (!opt || skip_in_config(opt)) {
      throw UsageError("unknown config key '" + key + "' for '" + sub->get_name() + "'");
    }
    if (opt->get_lnames().empty()) {
      positionals.push_back(json_token(value));
    } else if (opt->get_type_size() == 0) {
      flags.push_back("--" + opt->get_lnames().front() + "=" + json_token(value));
    } else {
      flags.push_back("--" + opt->get_lnames().front());
      flags.push_back(json_token(value));
    }
  }
  positionals.insert(positionals.end(), flags.begin(), flags.end());
  return positionals;
}

/// Command-line tokens equivalent to a JSON config or run manifest.
std::vector<std::string> config_tokens(const CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const std::exception& e) {
    throw UsageError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (doc.is_object() && doc.contains("manifest")) doc = doc["manifest"];
  if (doc.is_object() && doc.contains("tool") && doc.contains("config")) {
    if (doc.value("command", "") != sub->get_name()) {
      throw UsageError("manifest was written by '" + doc.value("command", "") + "', not '" +
                       sub->get_name() + "'");
    }
    doc = doc["config"];
  }
  return config_tokens_from(sub, doc);
}

// --- shared option groups ---------------------------------------------------

struct MaterialOpts {
  double E_MPa = 190000.0;
  double nu = 0.3;
  double alpha_void = kDefaultAlphaVoid;

  void add(CLI::App* app) {
    app->add_option("--E-MPa", E_MPa, "Young's modulus of the bulk material [MPa]");
    app->add_option("--nu", nu, "Poisson ratio of the bulk material");
    app->add_option("--alpha-void", alpha_void, "indicator value of void voxels");
  }
  ElasticMaterial material() const { return ElasticMaterial(E_MPa, nu); }
};

struct DiscOpts {
  std::string voxels_per_cell = "4";
  int degree = 2;

  void add(CLI::App* app) {
    app->add_option("--voxels-per-cell", voxels_per_cell, "voxels per finite cell, n or nx,ny,nz");
    app->add_option("--degree", degree, "polynomial degree p")->check(CLI::Range(1, 30));
  }
  Discretization disc() const { return {parse_int3(voxels_per_cell, "--voxels-per-cell"), degree}; }
};

struct SolverOpts {
  double tolerance = 1e-10;
  std::size_t max_iterations = 50000;
  std::string preconditioner = "jacobi";

  void add(CLI::App* app) {
    app->add_option("--tolerance", tolerance, "relative residual tolerance of CG");
    app->add_option("--max-iterations", max_iterations, "CG iteration limit");
    app->add_option("--preconditioner", preconditioner, "none|jacobi")
        ->check(CLI::IsMember({"none", "jacobi"}));
  }
  SolverConfig config() const {
    SolverConfig c;
    c.rel_tolerance = tolerance;
    c.max_iterations = max_iterations;
    c.preconditioner = parse_preconditioner(preconditioner);
    return c;
  }
};

struct InputOpts {
  std::string input;
  double threshold = 0.5;
  bool exclusive = false;

  void add(CLI::App* app) {
    app->add_option("--input", input, "RAW+JSON volume (path of the .json sidecar)")->required();
    app->add_option("--threshold", threshold, "segmentation threshold in input units");
    app->add_flag("--exclusive", exclusive, "material only strictly above the threshold");
  }
  VoxelGrid load(double alpha_void) const {
    const GrayscaleVolume vol = load_raw_volume(input);
    return threshold_segment(vol, {threshold, !exclusive}, alpha_void);
  }
};

struct OctetOpts {
  double cell_mm = 4.0;
  double d_horizontal_mm = 0.8;
  double d_inclined_mm = 0.4;
  std::string build_axis = "y";

  void add(CLI::App* app) {
    app->add_option("--cell-mm", cell_mm, "cubic cell edge [mm]");
    app->add_option("--d-horizontal-mm,--d-horizontal", d_horizontal_mm,
                    "diameter of struts normal to the build axis [mm]");
    app->add_option("--d-inclined-mm,--d-inclined", d_inclined_mm, "diameter of inclined struts [mm]");
    app->add_option("--build-axis", build_axis, "x|y|z")->check(CLI::IsMember({"x", "y", "z"}));
  }
  OctetCellSpec spec() const {
    OctetCellSpec s;
    s.cell_size_mm = cell_mm;
    s.d_horizontal_mm = d_horizontal_mm;
    s.d_inclined_mm = d_inclined_mm;
    s.build_axis = parse_axis(build_axis);
    return s;
  }
};

struct TensileOpts {
  std::string pull_axis = "z";
  double displacement_mm = 0.01;
  std::string gage = "0.25,0.75";
  double area_mm2 = 0.0;
  std::string grips = "axial";
  double penalty_factor = 1e8;

  void add(CLI::App* app) {
    app->add_option("--pull-axis", pull_axis, "x|y|z")->check(CLI::IsMember({"x", "y", "z"}));
    app->add_option("--displacement-mm", displacement_mm, "pull-face displacement [mm]");
    app->add_option("--gage", gage, "gage planes as length fractions, begin,end");
    app->add_option("--area-mm2", area_mm2, "cross-section area [mm^2]; 0 uses the bounding box");
    app->add_option("--grips", grips, "axial|full")->check(CLI::IsMember({"axial", "full"}));
    app->add_option("--penalty-factor", penalty_factor, "penalty beta = factor * E / h_cell");
  }
  TensileSetup setup(const SolverConfig& solver) const {
    TensileSetup s;
    s.pull_axis = parse_axis_index(pull_axis);
    s.displacement_mm = displacement_mm;
    const auto g = parse_list(gage, "--gage");
    if (g.size() != 2) throw UsageError("--gage needs two fractions");
    s.gage_begin = g[0];
    s.gage_end = g[1];
    if (area_mm2 > 0.0) s.area_mm2 = area_mm2;
    s.grips = parse_grip_mode(grips);
    s.penalty_factor = penalty_factor;
    s.solver = solver;
    return s;
  }
};

void emit(const Json& doc, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << doc.dump(2) << '\n';
  } else {
    write_report(doc, path);
  }
}

Int3 cell_voxels_for(double cell_mm, double spacing_mm) {
  const double n = cell_mm / spacing_mm;
  const int r = static_cast<int>(std::lround(n));
  if (r < 1 || std::abs(n - r) > 1e-9 * n) throw UsageError("voxel spacing must divide the cell size");
  return {r, r, r};
}

DefectSpec parse_defects(const std::string& text, std::uint64_t seed, Axis build_axis) {
  Json j;
  try {
    std::ifstream f(text);
    j = f ? Json::parse(f) : Json::parse(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--defects is neither a JSON file nor inline JSON: ") + e.what());
  }
  DefectSpec d;
  d.rng_seed = seed;
  d.build_axis = build_axis;
  for (const auto& [key, value] : j.items()) {
    if (key == "powder_blob_density_per_mm2") {
      d.powder_blob_density_per_mm2 = value.get<double>();
    } else if (key == "blob_radius_min_mm") {
      d.blob_radius_min_mm = value.get<double>();
    } else if (key == "blob_radius_max_mm") {
      d.blob_radius_max_mm = value.get<double>();
    } else if (key == "strut_oversize_mm") {
      d.strut_oversize_mm = value.get<double>();
    } else if (key == "rng_seed") {
      d.rng_seed = value.get<std::uint64_t>();
    } else {
      throw UsageError("unknown defect key '" + key + "'");
    }
  }
  return d;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"voxcell: voxel-based finite cell analysis of lattice structures", "voxcell"};
  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: VOXCELL_THREADS or all cores)");
  app.set_version_flag("--version", std::string(version()));

  auto add_config = [](CLI::App* sub) {
    sub->add_option("--config", "JSON config or run manifest; command-line flags take precedence");
  };

  // generate
  auto* gen = app.add_subcommand("generate", "voxelize a parametric lattice into RAW+JSON");
  std::string lattice = "octet";
  OctetOpts gen_octet;
  double gen_spacing_um = 25.0;
  std::string gen_reps = "1,1,1";
  int gen_supersample = 2;
  std::string gen_defects;
  std::uint64_t gen_seed = 0;
  std::string gen_output;
  gen->add_option("lattice", lattice, "lattice type")->check(CLI::IsMember({"octet"}));
  gen_octet.add(gen);
  gen->add_option("--spacing-um", gen_spacing_um, "voxel spacing [um]");
  gen->add_option("--reps", gen_reps, "tiling repetitions rx,ry,rz");
  gen->add_option("--supersample", gen_supersample, "samples per voxel edge")->check(CLI::PositiveNumber);
  gen->add_option("--defects", gen_defects, "defect spec, inline JSON or file");
  gen->add_option("--seed", gen_seed, "defect RNG seed");
  gen->add_option("--output", gen_output, "output sidecar path (.json)")->required();
  add_config(gen);

  // segment
  auto* seg = app.add_subcommand("segment", "threshold a grayscale volume into a u8 mask");
  InputOpts seg_in;
  seg_in.threshold = 14500.0;
  std::string seg_output;
  seg_in.add(seg);
  seg->add_option("--output", seg_output, "output sidecar path (.json)")->required();
  add_config(seg);

  // porosity
  auto* por = app.add_subcommand("porosity", "print the void fraction of a volume");
  InputOpts por_in;
  por_in.add(por);
  add_config(por);

  // homogenize
  auto* hom = app.add_subcommand("homogenize", "apparent elasticity tensor of an RVE or ensemble");
  InputOpts hom_in;
  MaterialOpts hom_mat;
  DiscOpts hom_disc;
  SolverOpts hom_solver;
  std::string hom_bc = "pbc";
  std::string hom_cells;
  std::size_t hom_count = 0;
  bool hom_subc_material = false;
  std::string hom_output;
  hom_in.add(hom);
  hom_mat.add(hom);
  hom_disc.add(hom);
  hom_solver.add(hom);
  hom->add_option("--bc", hom_bc, "pbc|kubc|subc")->check(CLI::IsMember({"pbc", "kubc", "subc"}));
  hom->add_option("--cells", hom_cells, "unit cell size in voxels; enables ensemble mode");
  hom->add_option("--count", hom_count, "number of unit cells (0: all available)");
  hom->add_flag("--subc-material-only", hom_subc_material, "SUBC traction on material faces only");
  hom->add_option("--output", hom_output, "result JSON path (stdout if empty)");
  add_config(hom);

  // dns
  auto* dns = app.add_subcommand("dns", "simulate a tensile test on the full specimen");
  InputOpts dns_in;
  MaterialOpts dns_mat;
  DiscOpts dns_disc;
  SolverOpts dns_solver;
  TensileOpts dns_tensile;
  std::string dns_output, dns_vtk;
  dns_in.add(dns);
  dns_mat.add(dns);
  dns_disc.add(dns);
  dns_solver.add(dns);
  dns_tensile.add(dns);
  dns->add_option("--output", dns_output, "result JSON path (stdout if empty)");
  dns->add_option("--vtk", dns_vtk, "also export voxel fields to this VTK file");
  add_config(dns);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "E*(phi) of the octet cell over strut increments");
  OctetOpts sw_octet;
  MaterialOpts sw_mat;
  DiscOpts sw_disc;
  SolverOpts sw_solver;
  double sw_spacing_um = 100.0;
  int sw_supersample = 2;
  std::string sw_increments = "0,0.1,0.2,0.3,0.4,0.5,0.6";
  std::string sw_axis = "z";
  double sw_target_phi = -1.0;
  std::string sw_output, sw_csv;
  sw_octet.add(sweep);
  sw_mat.add(sweep);
  sw_disc.add(sweep);
  sw_solver.add(sweep);
  sweep->add_option("--spacing-um", sw_spacing_um, "voxel spacing [um]");
  sweep->add_option("--supersample", sw_supersample, "samples per voxel edge")->check(CLI::PositiveNumber);
  sweep->add_option("--increments-mm", sw_increments, "diameter increments [mm]");
  sweep->add_option("--axis", sw_axis, "axis of the reported modulus")->check(CLI::IsMember({"x", "y", "z"}));
  sweep->add_option("--target-phi", sw_target_phi, "also report E* interpolated at this porosity");
  sweep->add_option("--output", sw_output, "result JSON path (stdout if empty)");
  sweep->add_option("--csv", sw_csv, "table CSV path");
  add_config(sweep);

  // convergence
  auto* conv = app.add_subcommand("convergence", "tensile E* over discretization variants");
  InputOpts cv_in;
  MaterialOpts cv_mat;
  SolverOpts cv_solver;
  TensileOpts cv_tensile;
  std::string cv_variants = "4:1,4:2,4:3";
  std::string cv_output, cv_csv;
  cv_in.add(conv);
  cv_mat.add(conv);
  cv_solver.add(conv);
  cv_tensile.add(conv);
  conv->add_option("--variants", cv_variants, "comma list of voxels_per_cell:p");
  conv->add_option("--output", cv_output, "result JSON path (stdout if empty)");
  conv->add_option("--csv", cv_csv, "table CSV path");
  add_config(conv);

  // export-vtk
  auto* vtk = app.add_subcommand("export-vtk", "write voxel data, optionally with DNS fields, as VTK");
  InputOpts vtk_in;
  MaterialOpts vtk_mat;
  DiscOpts vtk_disc;
  SolverOpts vtk_solver;
  TensileOpts vtk_tensile;
  std::string vtk_fields = "none";
  std::string vtk_output;
  vtk_in.add(vtk);
  vtk_mat.add(vtk);
  vtk_disc.add(vtk);
  vtk_solver.add(vtk);
  vtk_tensile.add(vtk);
  vtk->add_option("--fields", vtk_fields, "none|dns")->check(CLI::IsMember({"none", "dns"}));
  vtk->add_option("--output", vtk_output, "VTK file path")->required();
  add_config(vtk);

  // Splice config tokens right after the subcommand name so that explicit
  // flags, which come later, win.
  std::vector<std::string> argv(args.begin() + (args.empty() ? 0 : 1), args.end());
  try {
    for (std::size_t i = 0; i < argv.size(); ++i) {
      CLI::App* sub = app.get_subcommand_no_throw(argv[i]);
      if (!sub) continue;
      std::string cfg_path;
      for (std::size_t k = i + 1; k < argv.size(); ++k) {
        if (argv[k] == "--config" && k + 1 < argv.size()) cfg_path = argv[k + 1];
        if (argv[k].rfind("--config=", 0) == 0) cfg_path = argv[k].substr(9);
      }
      if (!cfg_path.empty()) {
        const auto tokens = config_tokens(sub, cfg_path);
        argv.insert(argv.begin() + static_cast<std::ptrdiff_t>(i + 1), tokens.begin(), tokens.end());
      }
      break;
    }
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  try {
    if (threads > 0) set_thread_count(threads);
    CLI::App* sub = app.get_subcommands().front();
    const Json config = echo_config(sub);
    const std::string command = sub->get_name();

    if (sub == gen) {
      const OctetCellSpec spec = gen_octet.spec();
      const double h = gen_spacing_um * 1e-3;
      const Int3 n = cell_voxels_for(spec.cell_size_mm, h);
      VoxelGrid cell = voxelize(octet_solid(spec), n, {spec.cell_size_mm / n[0], spec.cell_size_mm / n[1],
                                                       spec.cell_size_mm / n[2]},
                                gen_supersample);
      VoxelGrid grid = tile(cell, parse_int3(gen_reps, "--reps"));
      if (!gen_defects.empty()) grid = apply_defects(grid, parse_defects(gen_defects, gen_seed, spec.build_axis));
      save_voxel_grid(grid, gen_output);
      Json doc;
      doc["output"] = gen_output;
      doc["dims"] = {grid.dims()[0], grid.dims()[1], grid.dims()[2]};
      doc["porosity"] = porosity(grid);
      doc["manifest"] = make_manifest(command, config, elapsed(), thread_count());
      out << doc.dump(2) << '\n';
    } else if (sub == seg) {
      const VoxelGrid grid = seg_in.load(kDefaultAlphaVoid);
      save_voxel_grid(grid, seg_output);
      Json doc;
      doc["output"] = seg_output;
      doc["porosity"] = porosity(grid);
      doc["manifest"] = make_manifest(command, config, elapsed(), thread_count());
      out << doc.dump(2) << '\n';
    } else if (sub == por) {
      out << Json(porosity(por_in.load(kDefaultAlphaVoid))).dump() << '\n';
    } else if (sub == hom) {
      const VoxelGrid grid = hom_in.load(hom_mat.alpha_void);
      const BcKind bc = parse_bc_kind(hom_bc);
      const Discretization d = hom_disc.disc();
      Json doc;
      if (hom_cells.empty()) {
        const FcmModel model(grid, d.voxels_per_cell, d.degree, hom_mat.material());
        HomogenizationOptions o;
        o.solver = hom_solver.config();
        o.subc.material_only = hom_subc_material;
        o.rve_id = hom_in.input;
        doc = to_json(effective_tensor(model, bc, o));
      } else {
        const Int3 c = parse_int3(hom_cells, "--cells");
        std::size_t available = 1;
        for (int k = 0; k < 3; ++k) available *= static_cast<std::size_t>(grid.dims()[k] / c[k]);
        const auto n = static_cast<int>(hom_count == 0 ? available : hom_count);
        const auto cells = extract_unit_cells(grid, c, n);
        EnsembleOptions eo;
        eo.voxels_per_cell = d.voxels_per_cell;
        eo.degree = d.degree;
        eo.homogenization.solver = hom_solver.config();
        eo.homogenization.subc.material_only = hom_subc_material;
        doc = to_json(ensemble_homogenize(cells, hom_mat.material(), bc, eo), bc);
      }
      doc["manifest"] = make_manifest(command, config, elapsed(), thread_count());
      emit(doc, hom_output, out);
    } else if (sub == dns || sub == vtk) {
      const bool is_dns = sub == dns;
      InputOpts& in = is_dns ? dns_in : vtk_in;
      MaterialOpts& mat = is_dns ? dns_mat : vtk_mat;
      const VoxelGrid grid = in.load(mat.alpha_void);
      if (!is_dns && vtk_fields == "none") {
        export_vtk(grid, nullptr, vtk_output);
        return 0;
      }
      const Discretization d = (is_dns ? dns_disc : vtk_disc).disc();
      const FcmModel model(grid, d.voxels_per_cell, d.degree, mat.material());
      const TensileSetup setup =
          (is_dns ? dns_tensile : vtk_tensile).setup((is_dns ? dns_solver : vtk_solver).config());
      const TensileResult r = tensile_test(model, setup);
      const std::string vtk_path = is_dns ? dns_vtk : vtk_output;
      if (!vtk_path.empty()) {
        const VoxelFields f = sample_voxel_fields(model, r.solution);
        export_vtk(grid, &f, vtk_path);
      }
      if (is_dns) {
        Json doc = to_json(r, setup);
        doc["porosity"] = porosity(grid);
        doc["manifest"] = make_manifest(command, config, elapsed(), thread_count());
        emit(doc, dns_output, out);
      }
    } else if (sub == sweep) {
      SweepResolution res;
      res.spacing_mm = sw_spacing_um * 1e-3;
      res.supersample = sw_supersample;
      res.disc = sw_disc.disc();
      const auto rows = porosity_sweep(sw_octet.spec(), parse_list(sw_increments, "--increments-mm"), res,
                                       sw_mat.material(), parse_axis_index(sw_axis), sw_solver.config());
      Json doc;
      doc["rows"] = to_json(rows, res);
      if (sw_target_phi >= 0.0) {
        try {
          doc["interpolated"] = {{"phi", sw_target_phi},
                                 {"E_star_MPa", interpolate_modulus(rows, sw_target_phi)}};
        } catch (const DomainError& e) {
          doc["interpolated"] = {{"phi", sw_target_phi}, {"E_star_MPa", nullptr}, {"error", e.what()}};
        }
      }
      doc["manifest"] = make_manifest(command, config, elapsed(), thread_count());
      if (!sw_csv.empty()) write_sweep_csv(rows, res, sw_csv);
      emit(doc, sw_output, out);
    } else if (sub == conv) {
      const VoxelGrid grid = cv_in.load(cv_mat.alpha_void);
      std::vector<Discretization> variants;
      for (const auto& item : split(cv_variants, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2) throw UsageError("variant '" + item + "' is not voxels_per_cell:p");
        const double p = parse_double(parts[1], "--variants");
        variants.push_back({parse_int3(parts[0], "--variants"), static_cast<int>(p)});
      }
      const ConvergenceStudy study =
          convergence_study(grid, cv_mat.material(), cv_tensile.setup(cv_solver.config()), variants);
      const double phi = porosity(grid);
      Json doc = to_json(study, phi);
      doc["manifest"] = make_manifest(command, config, elapsed(), thread_count());
      if (!cv_csv.empty()) write_convergence_csv(study, phi, cv_csv);
      emit(doc, cv_output, out);
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    Json j;
    std::string type = "error";
    if (dynamic_cast<const SizeMismatchError*>(&e)) type = "size_mismatch";
    else if (dynamic_cast<const LoadCaseError*>(&e)) type = "load_case";
    else if (dynamic_cast<const DivergenceError*>(&e)) type = "divergence";
    else if (dynamic_cast<const RankError*>(&e)) type = "rank";
    else if (dynamic_cast<const DomainError*>(&e)) type = "domain";
    j["error"] = {{"type", type}, {"message", e.what()}};
    err << j.dump() << '\n';
    return 1;
  }
}

}  // namespace voxcell::cli
