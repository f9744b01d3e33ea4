#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "naghdi/mesh.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::string cli = NAGHDI_CLI_PATH;

fs::path workdir() {
  fs::path d = fs::temp_directory_path() / "naghdi_cli_test";
  fs::create_directories(d);
  return d;
}

int run(const std::string& args) {
  int rc = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("cli mesh generation") {
  auto dir = workdir();
  auto mesh = dir / "plate.off";
  REQUIRE(run("mesh --kind plate --resolution 10 --out " + mesh.string()) == 0);
  naghdi::SurfaceMesh m = naghdi::load_off(mesh.string());
  CHECK(m.n_vertices() == 121);
  CHECK(m.n_faces() == 200);

  auto cyl = dir / "cyl.off";
  REQUIRE(run("mesh --kind cylinder --resolution 8 --out " + cyl.string()) == 0);
  naghdi::SurfaceMesh c = naghdi::load_off(cyl.string());
  for (const auto& p : c.vertices)
    CHECK(std::abs(std::sqrt(p.x * p.x + p.y * p.y) - 1.0) < 1e-12);

  auto cap = dir / "cap.off";
  REQUIRE(run("mesh --kind cap --resolution 6 --out " + cap.string()) == 0);
  CHECK(naghdi::load_off(cap.string()).boundary_loops.size() == 1);

  CHECK(run("mesh --kind dodecahedron --out " + (dir / "x.off").string()) == 1);
}

TEST_CASE("cli escape certification") {
  auto dir = workdir();
  auto mesh = dir / "plate12.off";
  REQUIRE(run("mesh --kind plate --resolution 12 --out " + mesh.string()) == 0);

  auto cfg = dir / "escape.cfg";
  write_file(cfg, "field = radial\nlambda0 = 1\n");
  auto out = dir / "cert.json";
  CHECK(run("escape-check --mesh " + mesh.string() + " --config " + cfg.string() + " --out " +
            out.string()) == 0);
  json cert = json::parse(slurp(out));
  CHECK(cert["pass"].get<bool>());
  CHECK(cert["v_min"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(cert.contains("provenance"));

  write_file(cfg, "field = rotation\nlambda0 = 1\n");
  CHECK(run("escape-check --mesh " + mesh.string() + " --config " + cfg.string() + " --out " +
            out.string()) == 2);

  write_file(cfg, "field = radial\nbogus_key = 3\n");
  CHECK(run("escape-check --mesh " + mesh.string() + " --config " + cfg.string() + " --out " +
            out.string()) == 1);
}

TEST_CASE("cli simulate: conservative summary and determinism") {
  auto dir = workdir();
  auto mesh = dir / "plate8.off";
  REQUIRE(run("mesh --kind plate --resolution 8 --out " + mesh.string()) == 0);
  auto cfg = dir / "sim.cfg";
  write_file(cfg,
             "region = none\ndt = 1e-3\nt_end = 0.3\nsample_stride = 10\n"
             "initial = mode\nseed = 5\nsolver_tol = 1e-12\n");
  auto out1 = dir / "run1";
  auto out2 = dir / "run2";
  REQUIRE(run("simulate --mesh " + mesh.string() + " --config " + cfg.string() + " --out " +
              out1.string()) == 0);
  REQUIRE(run("simulate --mesh " + mesh.string() + " --config " + cfg.string() + " --out " +
              out2.string()) == 0);
  json summary = json::parse(slurp(out1.string() + ".json"));
  CHECK(summary["c2"].get<double>() < 1e-6);
  CHECK(summary["residuals"]["energy_balance"].get<double>() < 1e-9);

  // Determinism: byte-identical outputs for identical config + seed.
  CHECK(slurp(out1.string() + ".csv") == slurp(out2.string() + ".csv"));
  CHECK(slurp(out1.string() + ".json") == slurp(out2.string() + ".json"));

  // Provenance header present in the CSV.
  std::string csv = slurp(out1.string() + ".csv");
  CHECK(csv.rfind("# config_hash=", 0) == 0);
  CHECK(csv.find("mesh_hash=") != std::string::npos);
}

TEST_CASE("cli control rejects a too-short horizon") {
  auto dir = workdir();
  auto mesh = dir / "plate6.off";
  REQUIRE(run("mesh --kind plate --resolution 6 --out " + mesh.string()) == 0);
  auto cfg = dir / "ctl.cfg";
  write_file(cfg,
             "region = all\na0 = 0.05\nT = 0.05\ndt = 0.01\ninitial = mode\n"
             "norm_probes = 1\nnorm_iters = 3\n");
  CHECK(run("control --mesh " + mesh.string() + " --config " + cfg.string() + " --out " +
            (dir / "ctl").string()) == 2);
}

TEST_CASE("cli identity report") {
  auto dir = workdir();
  auto mesh = dir / "plate8b.off";
  REQUIRE(run("mesh --kind plate --resolution 8 --out " + mesh.string()) == 0);
  auto cfg = dir / "ident.cfg";
  write_file(cfg,
             "region = all\na0 = 1\ndt = 2e-3\nt_end = 0.2\nsample_stride = 1\n"
             "p_value = 0.5\ninitial = mode\n");
  auto out = dir / "ident.json";
  REQUIRE(run("identity --mesh " + mesh.string() + " --config " + cfg.string() + " --out " +
              out.string()) == 0);
  json rep = json::parse(slurp(out));
  CHECK(rep["virial_residual"].get<double>() < 1e-2);
  CHECK(rep["energy_balance_residual"].get<double>() < 1e-4);
}
