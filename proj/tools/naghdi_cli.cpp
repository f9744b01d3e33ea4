// Command-line driver: mesh generation, escape certification, damped shell
// simulation, identity checks, and control synthesis. One command per process;
// identical config + seed produce byte-identical outputs.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "naghdi/control.hpp"
#include "naghdi/io.hpp"
#include "naghdi/kernels.hpp"
#include "naghdi/mesh_gen.hpp"

using json = nlohmann::ordered_json;
using namespace naghdi;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailedCheck = 2;

struct CommonArgs {
  std::string mesh_path, config_path, out_path;
  long seed = 0;
  double dt = -1.0, t_end = -1.0, a0 = -1.0, T = -1.0;
  std::string region;
};

RunConfig load_config(const CommonArgs& args) {
  RunConfig cfg;
  if (!args.config_path.empty()) cfg = RunConfig::parse_file(args.config_path);
  // Flag overrides.
  if (args.seed != 0) cfg.set("seed", std::to_string(args.seed));
  if (args.dt > 0.0) cfg.set("dt", format_double(args.dt));
  if (args.t_end > 0.0) cfg.set("t_end", format_double(args.t_end));
  if (args.a0 > 0.0) cfg.set("a0", format_double(args.a0));
  if (args.T > 0.0) cfg.set("T", format_double(args.T));
  if (!args.region.empty()) cfg.set("region", args.region);
  return cfg;
}

MaterialParams material_from(const RunConfig& cfg) {
  MaterialParams p;
  p.E_young = cfg.get_double("E", 1.0);
  p.mu_poisson = cfg.get_double("mu", 0.3);
  p.h_thickness = cfg.get_double("h", 0.01);
  p.validate();
  return p;
}

SimConfig sim_from(const RunConfig& cfg) {
  SimConfig sc;
  sc.dt = cfg.get_double("dt", 1e-3);
  sc.t_end = cfg.get_double("t_end", 1.0);
  sc.sample_stride = cfg.get_int("sample_stride", 10);
  sc.solver_tol = cfg.get_double("solver_tol", 1e-10);
  sc.validate();
  return sc;
}

int nearest_vertex(const SurfaceMesh& mesh, Vec3 p) {
  int best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    double d = dot(mesh.vertices[v] - p, mesh.vertices[v] - p);
    if (d < bd) {
      bd = d;
      best = v;
    }
  }
  return best;
}

int interior_vertex_near(const SurfaceMesh& mesh, Vec3 p) {
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (mesh.is_boundary[v]) continue;
    double d = dot(mesh.vertices[v] - p, mesh.vertices[v] - p);
    if (d < bd) {
      bd = d;
      best = v;
    }
  }
  if (best < 0) throw std::runtime_error("mesh has no interior vertex");
  return best;
}

Vec3 mesh_centroid(const SurfaceMesh& mesh) {
  Vec3 c{};
  for (const auto& v : mesh.vertices) c += v;
  return c / static_cast<double>(mesh.n_vertices());
}

// Built-in analytic field specs plus the geodesic-ball construction.
TangentField named_field(const Surface& s, const std::string& name, Vec3 center) {
  TangentField V(s.n_vertices());
  if (name == "ball") return ball_escape_field(s, nearest_vertex(s.mesh, center));
  for (int v = 0; v < s.n_vertices(); ++v) {
    Vec3 p = s.mesh.vertices[v] - center;
    Vec3 amb;
    if (name == "radial")
      amb = p;
    else if (name == "rotation")
      amb = {-p.y, p.x, 0.0};
    else if (name == "shear")
      amb = {p.x, -p.y, 0.0};
    else
      throw std::runtime_error("unknown field spec: " + name);
    // Project to the tangent plane at the vertex.
    amb = amb - s.vframe[v].N * dot(amb, s.vframe[v].N);
    V[v] = s.ambient_to_vertex(v, amb);
  }
  return V;
}

// Damping profile per the 'region' key: all | none | collar | balls.
struct RegionResult {
  ScalarField a;
  double measure = 0.0;
  double fraction = 0.0;
  std::string kind;
};

RegionResult build_damping(const Surface& s, const MaterialParams& p, const RunConfig& cfg) {
  RegionResult out;
  out.kind = cfg.get("region", "all");
  double a0 = cfg.get_double("a0", 1.0);
  double eps = cfg.get_double("eps", 0.05);
  double taper = cfg.get_double("taper", 0.0);
  if (out.kind == "none") {
    out.a.assign(s.n_vertices(), 0.0);
    return out;
  }
  if (out.kind == "all") {
    out.a.assign(s.n_vertices(), a0);
    out.measure = s.total_area;
    out.fraction = 1.0;
    return out;
  }
  double lambda0 = cfg.get_double("lambda0", 0.0);
  if (lambda0 <= 0.0) lambda0 = korn_constants(s, p, cfg.get_long("seed", 1)).lambda0;
  std::vector<std::pair<int, double>> balls;
  if (out.kind == "collar") {
    int center = interior_vertex_near(s.mesh, mesh_centroid(s.mesh));
    balls.push_back({center, 1e9});
  } else if (out.kind == "balls") {
    int n = cfg.get_int("balls_n", 4);
    double radius = cfg.get_double("ball_radius", 0.5 / n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        Vec3 c = {(i + 0.5) / n, (j + 0.5) / n, 0.0};
        balls.push_back({nearest_vertex(s.mesh, c), radius});
      }
  } else {
    throw std::runtime_error("unknown region kind: " + out.kind);
  }
  EscapeRegion region = build_escape_region(s, p, lambda0, balls, eps);
  out.a = damping_from_region(s, region, a0, taper);
  out.measure = region.measure;
  out.fraction = region.measure / s.total_area;
  return out;
}

std::vector<double> initial_displacement(const AssembledSystem& sys, const RunConfig& cfg) {
  std::string kind = cfg.get("initial", "mode");
  const Surface& s = *sys.surface;
  if (kind == "mode") {
    EigOptions opts;
    opts.seed = cfg.get_long("seed", 1);
    auto eig = smallest_gen_eig(sys.K, sys.M, opts);
    return eig.vector;  // M-normalized
  }
  if (kind == "bump") {
    ShellState st = ShellState::zero(s.n_vertices());
    Vec3 c = mesh_centroid(s.mesh);
    double w = cfg.get_double("bump_width", 0.2);
    for (int v = 0; v < s.n_vertices(); ++v) {
      Vec3 d = s.mesh.vertices[v] - c;
      st.w1[v] = std::exp(-dot(d, d) / (2.0 * w * w));
    }
    return pack_state(sys.dofs, st);
  }
  if (kind == "random") return random_vector(sys.n(), cfg.get_long("seed", 1));
  throw std::runtime_error("unknown initial data kind: " + kind);
}

std::vector<std::string> provenance(const RunConfig& cfg, const std::string& mesh_path) {
  return {"config_hash=" + cfg.hash(), "mesh_hash=" + file_hash(mesh_path)};
}

void write_json(const std::string& path, json j) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  std::string text = j.dump(2);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fputc('\n', f);
  std::fclose(f);
}

const std::set<std::string> kSimKeys = {
    "E",  "mu",   "h",     "dt",          "t_end", "sample_stride", "solver_tol", "a0",
    "eps", "taper", "region", "balls_n",  "ball_radius", "lambda0", "initial",
    "bump_width", "seed", "fit_t0", "fit_t1"};

int cmd_mesh(const std::string& kind, int resolution, const std::string& out) {
  SurfaceMesh mesh = make_mesh(kind, resolution);
  save_off(mesh, out);
  std::cout << "wrote " << out << " (" << mesh.n_vertices() << " vertices, " << mesh.n_faces()
            << " triangles, " << mesh.boundary_loops.size() << " boundary loops)\n";
  return 0;
}

int cmd_escape_check(const CommonArgs& args) {
  RunConfig cfg = load_config(args);
  cfg.require_known({"E", "mu", "h", "field", "center_x", "center_y", "center_z", "lambda0",
                     "seed"});
  MaterialParams p = material_from(cfg);
  Surface s = Surface::build(load_off(args.mesh_path));
  Vec3 center = {cfg.get_double("center_x", 0.5), cfg.get_double("center_y", 0.5),
                 cfg.get_double("center_z", 0.0)};
  TangentField V = named_field(s, cfg.get("field", "radial"), center);
  double lambda0 = cfg.get_double("lambda0", 0.0);
  if (lambda0 <= 0.0) lambda0 = korn_constants(s, p, cfg.get_long("seed", 1)).lambda0;
  auto cert = check_escape(s, V, lambda0, p.beta());
  json j;
  j["provenance"] = {{"config_hash", cfg.hash()}, {"mesh_hash", file_hash(args.mesh_path)}};
  j["field"] = cfg.get("field", "radial");
  j["v_min"] = cert.v_min;
  j["l_max"] = cert.l_max;
  j["lambda0"] = cert.lambda0;
  j["beta"] = cert.beta;
  j["margin"] = cert.margin;
  j["margin_half"] = cert.margin_half;
  j["residual"] = cert.residual;
  j["residual_tol"] = cert.residual_tol;
  j["is_candidate"] = cert.is_candidate;
  j["pass"] = cert.pass;
  if (!cert.is_candidate) j["worst_face"] = cert.worst_face;
  write_json(args.out_path, j);
  if (!cert.pass) {
    std::cerr << (cert.is_candidate ? "escape margin not positive" : "not an escape candidate")
              << " (residual " << cert.residual << ", margin " << cert.margin << ")\n";
    return kExitFailedCheck;
  }
  return 0;
}

struct SimOutputs {
  SimResult result;
  RegionResult region;
  AssembledSystem sys;
  Surface surface;
  SimConfig sc;
};

void run_simulation(const CommonArgs& args, const RunConfig& cfg, SimOutputs& so) {
  so.surface = Surface::build(load_off(args.mesh_path));
  MaterialParams p = material_from(cfg);
  so.region = build_damping(so.surface, p, cfg);
  so.sys = assemble(so.surface, p, so.region.a);
  so.sys.surface = &so.surface;
  so.sc = sim_from(cfg);
  std::vector<double> u0 = initial_displacement(so.sys, cfg);
  std::vector<double> v0(so.sys.n(), 0.0);
  so.result = simulate(so.sys, std::move(u0), std::move(v0), so.sc);
}

json sim_summary(const CommonArgs& args, const RunConfig& cfg, SimOutputs& so) {
  double t_end = so.sc.t_end;
  auto fit = decay_fit(so.result.trace, cfg.get_double("fit_t0", 0.1 * t_end),
                       cfg.get_double("fit_t1", t_end));
  double balance = energy_balance_check(so.result.trace);
  json j;
  j["provenance"] = {{"config_hash", cfg.hash()}, {"mesh_hash", file_hash(args.mesh_path)}};
  j["c1"] = fit.c1;
  j["c2"] = fit.c2;
  j["r2"] = fit.r_squared;
  j["residuals"] = {{"energy_balance", balance}};
  j["E0"] = so.result.trace.energies.front();
  j["E_end"] = so.result.trace.energies.back();
  j["region"] = {{"kind", so.region.kind},
                 {"measure", so.region.measure},
                 {"fraction", so.region.fraction}};
  return j;
}

int cmd_simulate(const CommonArgs& args, bool fit_only) {
  RunConfig cfg = load_config(args);
  cfg.require_known(kSimKeys);
  SimOutputs so;
  run_simulation(args, cfg, so);
  if (!fit_only) {
    CsvWriter csv(args.out_path + ".csv", provenance(cfg, args.mesh_path),
                  {"t", "E", "dissipation_cum"});
    const auto& tr = so.result.trace;
    for (size_t i = 0; i < tr.times.size(); ++i)
      csv.row({tr.times[i], tr.energies[i], tr.dissipation_cum[i]});
  }
  write_json(args.out_path + ".json", sim_summary(args, cfg, so));
  return 0;
}

int cmd_identity(const CommonArgs& args) {
  RunConfig cfg = load_config(args);
  auto keys = kSimKeys;
  keys.insert("p_value");
  cfg.require_known(keys);
  Surface s = Surface::build(load_off(args.mesh_path));
  MaterialParams p = material_from(cfg);
  RegionResult region = build_damping(s, p, cfg);
  AssembledSystem sys = assemble(s, p, region.a);
  SimConfig sc = sim_from(cfg);
  std::vector<double> u0 = initial_displacement(sys, cfg);
  std::vector<double> v0(sys.n(), 0.0);
  StateHistory hist;
  auto result = simulate(sys, std::move(u0), std::move(v0), sc, &hist);
  ScalarField pfield(s.n_vertices(), cfg.get_double("p_value", 0.5));
  double virial = virial_identity_check(sys, hist, pfield);
  double balance = energy_balance_check(result.trace);
  json j;
  j["provenance"] = {{"config_hash", cfg.hash()}, {"mesh_hash", file_hash(args.mesh_path)}};
  j["virial_residual"] = virial;
  j["energy_balance_residual"] = balance;
  j["p_value"] = cfg.get_double("p_value", 0.5);
  write_json(args.out_path, j);
  return 0;
}

int cmd_control(const CommonArgs& args) {
  RunConfig cfg = load_config(args);
  auto keys = kSimKeys;
  for (const char* k : {"T", "tol", "max_iters", "norm_probes", "norm_iters"}) keys.insert(k);
  cfg.require_known(keys);
  Surface s = Surface::build(load_off(args.mesh_path));
  MaterialParams p = material_from(cfg);
  RegionResult region = build_damping(s, p, cfg);
  AssembledSystem sys = assemble(s, p, region.a);

  ControlProblem prob;
  prob.T = cfg.get_double("T", 2.0);
  prob.dt = cfg.get_double("dt", 1e-3);
  prob.sample_stride = cfg.get_int("sample_stride", 1);
  prob.tol = cfg.get_double("tol", 1e-4);
  prob.max_iters = cfg.get_int("max_iters", 200);
  prob.solver_tol = cfg.get_double("solver_tol", 1e-10);
  prob.norm_probes = cfg.get_int("norm_probes", 2);
  prob.norm_iters = cfg.get_int("norm_iters", 6);
  prob.seed = cfg.get_long("seed", 2024);
  prob.eta0 = initial_displacement(sys, cfg);
  prob.eta1.assign(sys.n(), 0.0);

  ControlResult res;
  try {
    res = russell_solve(sys, prob);
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return kExitFailedCheck;
  }

  // Control force at damped dofs only.
  std::vector<int> damped;
  for (int i = 0; i < sys.n(); ++i)
    if (sys.C_diag[i] > 0.0) damped.push_back(i);
  std::vector<std::string> cols = {"t"};
  for (int i : damped) cols.push_back("f" + std::to_string(i));
  CsvWriter csv(args.out_path + ".csv", provenance(cfg, args.mesh_path), cols);
  for (size_t k = 0; k < res.times.size(); ++k) {
    std::vector<double> row = {res.times[k]};
    for (int i : damped) row.push_back(res.force[k][i]);
    csv.row(row);
  }
  json j;
  j["provenance"] = {{"config_hash", cfg.hash()}, {"mesh_hash", file_hash(args.mesh_path)}};
  j["k_norm_estimate"] = res.k_norm_estimate;
  j["iterations"] = res.iterations;
  j["residuals"] = res.residuals;
  j["initial_energy"] = res.initial_energy;
  j["final_state_energy"] = res.final_state_energy;
  j["damped_dofs"] = static_cast<int>(damped.size());
  write_json(args.out_path + ".json", j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("NAGHDI_THREADS")) set_thread_cap(std::atoi(threads));

  CLI::App app{"Damped shell simulation, escape-region certification and exact control"};
  app.require_subcommand(1);

  std::string mesh_kind = "plate", mesh_out = "mesh.off";
  int resolution = 10;
  auto* mesh_cmd = app.add_subcommand("mesh", "generate a mesh (OFF)");
  mesh_cmd->add_option("--kind", mesh_kind, "plate | annulus | cylinder | cap");
  mesh_cmd->add_option("--resolution", resolution)->check(CLI::Range(4, 100000));
  mesh_cmd->add_option("--out", mesh_out);

  CommonArgs common;
  auto add_common = [&](CLI::App* cmd, bool need_mesh = true) {
    if (need_mesh) cmd->add_option("--mesh", common.mesh_path)->required();
    cmd->add_option("--config", common.config_path);
    cmd->add_option("--out", common.out_path)->required();
    cmd->add_option("--seed", common.seed);
    cmd->add_option("--dt", common.dt);
    cmd->add_option("--t-end", common.t_end);
    cmd->add_option("--a0", common.a0);
    cmd->add_option("--region", common.region);
    cmd->add_option("--T", common.T);
  };
  auto* escape_cmd = app.add_subcommand("escape-check", "certify an escape field");
  add_common(escape_cmd);
  auto* sim_cmd = app.add_subcommand("simulate", "damped run; writes trace CSV + summary JSON");
  add_common(sim_cmd);
  auto* decay_cmd = app.add_subcommand("decay", "damped run; writes fit JSON");
  add_common(decay_cmd);
  auto* ident_cmd = app.add_subcommand("identity", "multiplier identity residual report");
  add_common(ident_cmd);
  auto* control_cmd = app.add_subcommand("control", "Russell control synthesis");
  add_common(control_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (mesh_cmd->parsed()) return cmd_mesh(mesh_kind, resolution, mesh_out);
    if (escape_cmd->parsed()) return cmd_escape_check(common);
    if (sim_cmd->parsed()) return cmd_simulate(common, false);
    if (decay_cmd->parsed()) return cmd_simulate(common, true);
    if (ident_cmd->parsed()) return cmd_identity(common);
    if (control_cmd->parsed()) return cmd_control(common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
