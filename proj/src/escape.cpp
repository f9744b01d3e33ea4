#include "naghdi/escape.hpp"

#include "naghdi/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace naghdi {

DvDecomposition decompose_dv(const FaceMat& DV) {
  DvDecomposition out;
  out.v.resize(DV.size());
  out.l.resize(DV.size());
  const Mat2 eps = volume_element2();
  for (size_t f = 0; f < DV.size(); ++f) {
    out.v[f] = 0.5 * trace(DV[f]);
    out.l[f] = 0.5 * inner(DV[f], eps);
    Mat2 rem = DV[f] - out.v[f] * identity2() - out.l[f] * eps;
    double r = max_abs(rem);
    if (r > out.residual) {
      out.residual = r;
      out.worst_face = static_cast<int>(f);
    }
  }
  return out;
}

DvDecomposition decompose_dv(const Surface& s, const TangentField& V) {
  return decompose_dv(covariant_differential(s, V));
}

double escape_residual_tolerance(const Surface& s, const FaceScalar& v, const FaceScalar& l) {
  // 0.1 * min(1, field scale) at the baseline edge length 0.1, tightening
  // linearly with h. The scale includes |l| so that purely rotational
  // candidates (v = 0) are not rejected out of hand.
  double mv = 0.0, ml = 0.0;
  for (double x : v) mv += std::abs(x);
  for (double x : l) ml += std::abs(x);
  mv /= std::max<size_t>(1, v.size());
  ml /= std::max<size_t>(1, l.size());
  const double h_baseline = 0.1;
  return 0.1 * std::min(1.0, std::max(mv, ml)) * (s.h_mean / h_baseline);
}

EscapeCertificate check_escape(const Surface& s, const TangentField& V, double lambda0,
                               double beta, const std::vector<int>* faces) {
  if (!(lambda0 >= 1.0)) throw std::invalid_argument("check_escape: lambda0 must be >= 1");
  FaceMat DV = covariant_differential(s, V);
  EscapeCertificate c;
  c.lambda0 = lambda0;
  c.beta = beta;

  const Mat2 eps = volume_element2();
  auto face_list = [&]() {
    std::vector<int> all;
    if (faces) return *faces;
    all.resize(s.n_faces());
    for (int f = 0; f < s.n_faces(); ++f) all[f] = f;
    return all;
  }();
  if (face_list.empty()) throw std::invalid_argument("check_escape: empty face set");

  FaceScalar vloc(face_list.size()), lloc(face_list.size());
  c.v_min = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < face_list.size(); ++i) {
    int f = face_list[i];
    double v = 0.5 * trace(DV[f]);
    double l = 0.5 * inner(DV[f], eps);
    vloc[i] = v;
    lloc[i] = l;
    Mat2 rem = DV[f] - v * identity2() - l * eps;
    double r = max_abs(rem);
    if (r > c.residual) {
      c.residual = r;
      c.worst_face = f;
    }
    c.v_min = std::min(c.v_min, v);
    c.l_max = std::max(c.l_max, std::abs(l));
  }
  c.residual_tol = escape_residual_tolerance(s, vloc, lloc);
  c.is_candidate = c.residual <= c.residual_tol;
  c.margin = 2.0 * c.v_min - lambda0 * (1.0 + 2.0 * beta) * c.l_max;
  c.margin_half = 2.0 * c.v_min - lambda0 * (1.0 + 2.0 * beta) * 0.5 * c.l_max;
  c.pass = c.is_candidate && c.margin > 0.0;
  return c;
}

TangentField ball_escape_field(const Surface& s, int center) {
  // Discrete realization of the radial field of geodesic normal coordinates:
  // the tangent field closest to DV = g in least squares, pinned to zero at
  // the center. On developable patches the minimizer is the unrolled x - x0
  // exactly; elsewhere it is the smoothest certified candidate. Numerically
  // differentiated distance fields are never smooth enough here: their
  // second derivatives carry O(1) roughness that the decomposition residual
  // would report.
  if (center < 0 || center >= s.n_vertices())
    throw std::invalid_argument("ball_escape_field: bad center vertex");
  const int nv = s.n_vertices();
  auto dof = [&](int v, int a) { return v < center ? 2 * v + a : 2 * (v - 1) + a; };
  const int n = 2 * (nv - 1);
  std::vector<Triplet> trip;
  std::vector<double> rhs(n, 0.0);
  for (int f = 0; f < s.n_faces(); ++f) {
    const auto& t = s.mesh.triangles[f];
    Vec3 fe[2] = {s.fframe[f].e1, s.fframe[f].e2};
    double D[4][6];
    for (int r = 0; r < 4; ++r)
      for (int c2 = 0; c2 < 6; ++c2) D[r][c2] = 0.0;
    for (int k = 0; k < 3; ++k) {
      Vec3 ve[2] = {s.vframe[t[k]].e1, s.vframe[t[k]].e2};
      for (int a = 0; a < 2; ++a)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            D[i * 2 + j][2 * k + a] += dot(fe[i], ve[a]) * dot(s.hat_grad[f][k], fe[j]);
    }
    int gdof[6];
    for (int k = 0; k < 3; ++k)
      for (int a = 0; a < 2; ++a) gdof[2 * k + a] = (t[k] == center) ? -1 : dof(t[k], a);
    for (int p = 0; p < 6; ++p) {
      if (gdof[p] < 0) continue;
      rhs[gdof[p]] += s.face_area[f] * (D[0][p] + D[3][p]);  // <g, DU>
      for (int q = 0; q < 6; ++q) {
        if (gdof[q] < 0) continue;
        double v = 0.0;
        for (int r = 0; r < 4; ++r) v += D[r][p] * D[r][q];
        trip.push_back({gdof[p], gdof[q], s.face_area[f] * v});
      }
    }
  }
  Csr A = csr_from_triplets(n, std::move(trip));
  std::vector<double> x(n, 0.0);
  auto cg = pcg(A, rhs, x, 1e-11, 40 * n + 2000);
  if (!cg.converged)
    throw std::runtime_error("ball_escape_field: least-squares solve did not converge");
  TangentField V(nv, Vec2{});
  for (int v = 0; v < nv; ++v) {
    if (v == center) continue;
    V[v] = {x[dof(v, 0)], x[dof(v, 1)]};
  }
  return V;
}

std::vector<int> outflow_boundary_vertices(const Surface& s, const std::vector<int>& faces,
                                           const TangentField& V) {
  std::set<int> inside(faces.begin(), faces.end());
  FaceVec vf = tangent_to_faces(s, V);
  std::set<int> verts;
  for (const auto& e : s.mesh.edges) {
    bool in0 = e.f0 >= 0 && inside.count(e.f0);
    bool in1 = e.f1 >= 0 && inside.count(e.f1);
    if (in0 == in1) continue;  // interior to the set or fully outside
    int fin = in0 ? e.f0 : e.f1;
    // Outward in-plane normal of the edge relative to the inside face.
    Vec3 ev = s.mesh.vertices[e.v1] - s.mesh.vertices[e.v0];
    Vec3 nu3 = cross(ev, s.fframe[fin].N);
    Vec3 mid = (s.mesh.vertices[e.v1] + s.mesh.vertices[e.v0]) * 0.5;
    if (dot(nu3, s.face_centroid[fin] - mid) > 0.0) nu3 = nu3 * -1.0;
    Vec2 nu = s.ambient_to_face(fin, nu3);
    double nn = norm(nu);
    if (nn == 0.0) continue;
    if (dot(vf[fin], nu) / nn > 0.0) {
      verts.insert(e.v0);
      verts.insert(e.v1);
    }
  }
  return {verts.begin(), verts.end()};
}

EscapeRegion build_escape_region(const Surface& s, const MaterialParams& p, double lambda0,
                                 const std::vector<std::pair<int, double>>& balls, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("build_escape_region: eps must be positive");
  p.validate();
  EscapeRegion region;
  region.eps = eps;
  region.domain_area = s.total_area;

  // Place the balls, shrinking on overlap.
  std::vector<char> taken(s.n_vertices(), 0);
  for (auto [center, radius] : balls) {
    double r = radius;
    EntitySet set;
    bool placed = false;
    for (int attempt = 0; attempt < 20; ++attempt) {
      set = geodesic_ball(s, center, r);
      bool overlap = false;
      for (int v : set.vertices)
        if (taken[v]) {
          overlap = true;
          break;
        }
      if (!overlap) {
        placed = true;
        break;
      }
      r *= 0.9;
    }
    if (!placed)
      throw std::runtime_error("build_escape_region: ball at vertex " + std::to_string(center) +
                               " overlaps its neighbors even after shrinking to radius " +
                               std::to_string(r));
    for (int v : set.vertices) taken[v] = 1;

    EscapeSubregion sub;
    sub.center = center;
    sub.radius = r;
    sub.set = std::move(set);
    sub.field.V = ball_escape_field(s, center);
    sub.field.cert = check_escape(s, sub.field.V, lambda0, p.beta(), &sub.set.faces);
    auto dec = decompose_dv(s, sub.field.V);
    sub.field.v = std::move(dec.v);
    sub.field.l = std::move(dec.l);
    sub.field.margin = sub.field.cert.margin;
    if (!sub.field.cert.pass)
      throw std::runtime_error(
          "build_escape_region: ball at vertex " + std::to_string(center) +
          " does not carry a certified escape field (residual " +
          std::to_string(sub.field.cert.residual) + ", margin " +
          std::to_string(sub.field.cert.margin) + ")");
    sub.outflow_vertices = outflow_boundary_vertices(s, sub.set.faces, sub.field.V);
    region.subregions.push_back(std::move(sub));
  }

  // Sources: outflow boundaries plus everything the balls do not cover.
  std::set<int> covered_faces;
  for (const auto& sub : region.subregions)
    covered_faces.insert(sub.set.faces.begin(), sub.set.faces.end());
  std::set<int> sources;
  for (const auto& sub : region.subregions)
    sources.insert(sub.outflow_vertices.begin(), sub.outflow_vertices.end());
  for (int f = 0; f < s.n_faces(); ++f)
    if (!covered_faces.count(f))
      for (int k = 0; k < 3; ++k) sources.insert(s.mesh.triangles[f][k]);

  if (sources.empty()) {
    region.G = {};
    region.measure = 0.0;
    return region;
  }
  region.G = eps_neighborhood(s, {sources.begin(), sources.end()}, eps);
  region.measure = face_set_area(s, region.G.faces);
  return region;
}

namespace {
ScalarField damping_profile(const Surface& s, const std::vector<int>& g_vertices, double a0,
                            double taper) {
  if (!(a0 > 0.0)) throw std::invalid_argument("damping: a0 must be positive");
  if (taper < 0.0) throw std::invalid_argument("damping: taper must be nonnegative");
  ScalarField a(s.n_vertices(), 0.0);
  if (g_vertices.empty()) return a;
  if (taper == 0.0) {
    for (int v : g_vertices) a[v] = a0;
    return a;
  }
  auto d = graph_distance(s.mesh, g_vertices);
  for (int v = 0; v < s.n_vertices(); ++v) {
    double u = 1.0 - d[v] / taper;
    if (u <= 0.0) continue;
    u = std::min(1.0, u);
    a[v] = a0 * u * u * (3.0 - 2.0 * u);
  }
  return a;
}
}  // namespace

ScalarField damping_from_set(const Surface& s, const EntitySet& G, double a0, double taper) {
  return damping_profile(s, G.vertices, a0, taper);
}

ScalarField damping_from_region(const Surface& s, const EscapeRegion& region, double a0,
                                double taper) {
  return damping_profile(s, region.G.vertices, a0, taper);
}

}  // namespace naghdi
