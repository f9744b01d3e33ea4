#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "naghdi/escape.hpp"
#include "test_support.hpp"

using namespace naghdi;
using naghdi::testing::plate_surface;

namespace {

TangentField ambient_field(const Surface& s, Vec3 (*fn)(Vec3)) {
  TangentField V(s.n_vertices());
  for (int v = 0; v < s.n_vertices(); ++v) {
    Vec3 a = fn(s.mesh.vertices[v]);
    a = a - s.vframe[v].N * dot(a, s.vframe[v].N);
    V[v] = s.ambient_to_vertex(v, a);
  }
  return V;
}

Vec3 radial(Vec3 p) { return {p.x - 0.5, p.y - 0.5, 0.0}; }
Vec3 rotation(Vec3 p) { return {-(p.y - 0.5), p.x - 0.5, 0.0}; }
Vec3 shear(Vec3 p) { return {p.x - 0.5, -(p.y - 0.5), 0.0}; }

int center_vertex(const Surface& s, Vec3 p) {
  int best = 0;
  double bd = 1e300;
  for (int v = 0; v < s.n_vertices(); ++v) {
    double d = dot(s.mesh.vertices[v] - p, s.mesh.vertices[v] - p);
    if (d < bd) {
      bd = d;
      best = v;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("decompose_dv on the classical plate fields") {
  Surface s = plate_surface(10);
  auto dec = decompose_dv(s, ambient_field(s, radial));
  for (double v : dec.v) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
  for (double l : dec.l) CHECK(std::abs(l) < 1e-10);
  CHECK(dec.residual < 1e-10);

  dec = decompose_dv(s, ambient_field(s, rotation));
  for (double v : dec.v) CHECK(std::abs(v) < 1e-10);
  for (double l : dec.l) CHECK(std::abs(std::abs(l) - 1.0) < 1e-10);
  CHECK(dec.residual < 1e-10);

  dec = decompose_dv(s, ambient_field(s, shear));
  for (double v : dec.v) CHECK(std::abs(v) < 1e-10);
  for (double l : dec.l) CHECK(std::abs(l) < 1e-10);
  CHECK(dec.residual == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("decompose_dv inverts synthesis exactly") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  FaceMat DV(257);
  std::vector<double> v_in(DV.size()), l_in(DV.size());
  const Mat2 eps = volume_element2();
  for (size_t f = 0; f < DV.size(); ++f) {
    v_in[f] = u(rng);
    l_in[f] = u(rng);
    DV[f] = v_in[f] * identity2() + l_in[f] * eps;
  }
  auto dec = decompose_dv(DV);
  CHECK(dec.residual < 1e-12);
  for (size_t f = 0; f < DV.size(); ++f) {
    CHECK(dec.v[f] == doctest::Approx(v_in[f]).epsilon(1e-12));
    CHECK(dec.l[f] == doctest::Approx(l_in[f]).epsilon(1e-12));
  }
}

TEST_CASE("check_escape on plate fields") {
  Surface s = plate_surface(10);
  double beta = 0.75;

  auto cert = check_escape(s, ambient_field(s, radial), 1.0, beta);
  CHECK(cert.pass);
  CHECK(cert.margin == doctest::Approx(2.0).epsilon(1e-9));

  cert = check_escape(s, ambient_field(s, rotation), 1.0, beta);
  CHECK(cert.is_candidate);
  CHECK_FALSE(cert.pass);
  CHECK(cert.v_min == doctest::Approx(0.0).epsilon(1e-10));

  cert = check_escape(s, ambient_field(s, shear), 1.0, beta);
  CHECK_FALSE(cert.is_candidate);
  CHECK_FALSE(cert.pass);
  CHECK(cert.worst_face >= 0);
}

TEST_CASE("check_escape is scale covariant") {
  Surface s = plate_surface(8);
  TangentField V = ambient_field(s, radial);
  auto base = check_escape(s, V, 1.0, 0.5);
  TangentField Vs(V.size());
  for (size_t i = 0; i < V.size(); ++i) Vs[i] = 3.0 * V[i];
  auto scaled = check_escape(s, Vs, 1.0, 0.5);
  CHECK(scaled.v_min == doctest::Approx(3.0 * base.v_min).epsilon(1e-10));
  CHECK(scaled.l_max == doctest::Approx(3.0 * base.l_max).epsilon(1e-8));
  CHECK(scaled.margin == doctest::Approx(3.0 * base.margin).epsilon(1e-10));
  CHECK(scaled.pass == base.pass);
}

TEST_CASE("cylinder slit patch carries a certified escape field") {
  for (int res : {12, 20}) {
    Surface s = Surface::build(make_cylinder_patch(res));
    int x0 = center_vertex(s, {1.0, 0.0, 0.0});
    TangentField V = ball_escape_field(s, x0);
    auto cert = check_escape(s, V, 1.0, 0.5);
    INFO("res ", res, ": v_min ", cert.v_min, " l_max ", cert.l_max, " residual ",
         cert.residual, " tol ", cert.residual_tol, " margin ", cert.margin);
    CHECK(cert.pass);
    CHECK(cert.margin > 0.0);
    // Unrolled chart oracle: v = 1, l = 0.
    auto dec = decompose_dv(s, V);
    double mean_v = 0.0;
    for (double v : dec.v) mean_v += v;
    mean_v /= dec.v.size();
    CHECK(std::abs(mean_v - 1.0) < 0.05);
  }
}

TEST_CASE("escape region: no balls covers everything") {
  Surface s = plate_surface(10);
  MaterialParams p;
  EscapeRegion region = build_escape_region(s, p, 1.0, {}, 0.05);
  CHECK(region.measure == doctest::Approx(s.total_area).epsilon(1e-12));
  CHECK(region.G.faces.size() == static_cast<size_t>(s.n_faces()));
}

TEST_CASE("escape region: single covering ball concentrates on the outflow boundary") {
  Surface s = plate_surface(20);
  MaterialParams p;
  int center = center_vertex(s, {0.5, 0.5, 0.0});
  EscapeRegion region = build_escape_region(s, p, 1.0, {{center, 10.0}}, 0.05);
  REQUIRE(region.subregions.size() == 1);
  CHECK(region.subregions[0].field.cert.pass);
  // The center stays outside G; G hugs the boundary.
  std::set<int> gverts(region.G.vertices.begin(), region.G.vertices.end());
  CHECK_FALSE(gverts.count(center));
  CHECK(region.measure < 0.5 * s.total_area);
  for (int v : region.G.vertices) {
    Vec3 q = s.mesh.vertices[v];
    double border = std::min({q.x, q.y, 1.0 - q.x, 1.0 - q.y});
    CHECK(border < 0.05 + 3.0 * s.h_mean);
  }
}

TEST_CASE("escape region: measured area fraction of ball packings") {
  Surface s = plate_surface(40);
  MaterialParams p;
  auto pack = [&](int n, double eps) {
    std::vector<std::pair<int, double>> balls;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        balls.push_back({center_vertex(s, {(i + 0.5) / n, (j + 0.5) / n, 0.0}), 0.5 / n});
    EscapeRegion region = build_escape_region(s, p, 1.0, balls, eps);
    return region.measure / s.total_area;
  };
  double f44 = pack(4, 0.02);
  INFO("4x4 fraction ", f44);
  CHECK(f44 < 0.9);
  // Shrinking the collar shrinks the region.
  double tighter = pack(4, 0.01);
  CHECK(tighter <= f44 + 1e-12);
}

TEST_CASE("escape region: overlapping balls are rejected after shrinking") {
  Surface s = plate_surface(12);
  MaterialParams p;
  int c = center_vertex(s, {0.5, 0.5, 0.0});
  CHECK_THROWS_WITH_AS(build_escape_region(s, p, 1.0, {{c, 0.3}, {c, 0.3}}, 0.05),
                       doctest::Contains("overlaps"), std::runtime_error);
}

TEST_CASE("escape region satisfies the neighborhood inclusion by construction") {
  Surface s = plate_surface(16);
  MaterialParams p;
  std::vector<std::pair<int, double>> balls = {
      {center_vertex(s, {0.3, 0.3, 0.0}), 0.15}, {center_vertex(s, {0.7, 0.7, 0.0}), 0.15}};
  EscapeRegion region = build_escape_region(s, p, 1.0, balls, 0.04);
  // Recompute the required set and check G contains it.
  std::set<int> covered;
  for (const auto& sub : region.subregions)
    covered.insert(sub.set.faces.begin(), sub.set.faces.end());
  std::set<int> sources;
  for (const auto& sub : region.subregions)
    sources.insert(sub.outflow_vertices.begin(), sub.outflow_vertices.end());
  for (int f = 0; f < s.n_faces(); ++f)
    if (!covered.count(f))
      for (int k = 0; k < 3; ++k) sources.insert(s.mesh.triangles[f][k]);
  EntitySet req = eps_neighborhood(s, {sources.begin(), sources.end()}, region.eps);
  std::set<int> gfaces(region.G.faces.begin(), region.G.faces.end());
  for (int f : req.faces) CHECK(gfaces.count(f));
  std::set<int> gverts(region.G.vertices.begin(), region.G.vertices.end());
  for (int v : req.vertices) CHECK(gverts.count(v));
}

TEST_CASE("damping profiles") {
  Surface s = plate_surface(20);
  MaterialParams p;

  // Whole domain.
  EscapeRegion all = build_escape_region(s, p, 1.0, {}, 0.05);
  ScalarField a = damping_from_region(s, all, 2.5, 0.0);
  for (double x : a) CHECK(x == 2.5);

  // Empty region.
  EscapeRegion empty;
  a = damping_from_region(s, empty, 1.0, 0.1);
  for (double x : a) CHECK(x == 0.0);

  // Boundary collar: support area tracks area(G) + taper band.
  int center = center_vertex(s, {0.5, 0.5, 0.0});
  EscapeRegion collar = build_escape_region(s, p, 1.0, {{center, 10.0}}, 0.05);
  double taper = 0.05;
  a = damping_from_region(s, collar, 1.0, taper);
  for (double x : a) CHECK(x >= 0.0);
  for (int v : collar.G.vertices) CHECK(a[v] == doctest::Approx(1.0));
  std::set<int> support_faces;
  for (int f = 0; f < s.n_faces(); ++f)
    for (int k = 0; k < 3; ++k)
      if (a[s.mesh.triangles[f][k]] > 0.0) support_faces.insert(f);
  double supp_area = face_set_area(s, {support_faces.begin(), support_faces.end()});
  // Inner perimeter of the collar region.
  std::set<int> gfaces(collar.G.faces.begin(), collar.G.faces.end());
  double perim = 0.0;
  for (const auto& e : s.mesh.edges) {
    bool in0 = e.f0 >= 0 && gfaces.count(e.f0);
    bool in1 = e.f1 >= 0 && gfaces.count(e.f1);
    if (in0 != in1) perim += norm(s.mesh.vertices[e.v1] - s.mesh.vertices[e.v0]);
  }
  double expected = collar.measure + taper * perim;
  double one_layer = 2.0 * s.h_mean * perim;
  INFO("supp ", supp_area, " expected ", expected, " tolerance ", one_layer);
  CHECK(std::abs(supp_area - expected) <= one_layer);
}
