#include "naghdi/surface.hpp"

#include <cmath>
#include <cstdio>

#include "naghdi/calculus.hpp"

namespace naghdi {

namespace {

Vec3 stable_tangent(Vec3 N) {
  // Axis least aligned with N, projected into the tangent plane.
  Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  int best = 0;
  double best_abs = 2.0;
  for (int k = 0; k < 3; ++k) {
    double a = std::abs(dot(axes[k], N));
    if (a < best_abs) {
      best_abs = a;
      best = k;
    }
  }
  Vec3 t = axes[best] - N * dot(axes[best], N);
  return normalized(t);
}

}  // namespace

std::vector<FaceFrame> build_face_frames(const SurfaceMesh& mesh) {
  std::vector<FaceFrame> ff(mesh.n_faces());
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const auto& t = mesh.triangles[f];
    Vec3 p0 = mesh.vertices[t[0]], p1 = mesh.vertices[t[1]], p2 = mesh.vertices[t[2]];
    Vec3 N = normalized(cross(p1 - p0, p2 - p0));
    Vec3 e1 = normalized(p1 - p0);
    ff[f] = {e1, cross(N, e1), N};
  }
  return ff;
}

std::vector<VertexFrame> build_vertex_frames(const SurfaceMesh& mesh) {
  // Corner-weighted face-normal average, w = e1 x e2 / (|e1|^2 |e2|^2): exact
  // for vertices of a sphere and preserves ruled-surface symmetries.
  std::vector<Vec3> nv(mesh.n_vertices(), Vec3{});
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const auto& t = mesh.triangles[f];
    for (int k = 0; k < 3; ++k) {
      Vec3 a = mesh.vertices[t[(k + 1) % 3]] - mesh.vertices[t[k]];
      Vec3 b = mesh.vertices[t[(k + 2) % 3]] - mesh.vertices[t[k]];
      nv[t[k]] += cross(a, b) / (dot(a, a) * dot(b, b));
    }
  }
  std::vector<VertexFrame> vf(mesh.n_vertices());
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    Vec3 N = normalized(nv[v]);
    Vec3 e1 = stable_tangent(N);
    vf[v] = {e1, cross(N, e1), N};
  }
  return vf;
}

Surface Surface::build(SurfaceMesh mesh_in) {
  Surface s;
  s.mesh = std::move(mesh_in);
  if (s.mesh.edges.empty()) s.mesh.finalize();
  const SurfaceMesh& mesh = s.mesh;
  const int nf = mesh.n_faces();
  const int nv = mesh.n_vertices();

  s.fframe = build_face_frames(mesh);
  s.vframe = build_vertex_frames(mesh);

  s.face_area.resize(nf);
  s.face_centroid.resize(nf);
  s.hat_grad.resize(nf);
  s.vertex_area.assign(nv, 0.0);
  s.total_area = 0.0;
  for (int f = 0; f < nf; ++f) {
    const auto& t = mesh.triangles[f];
    Vec3 p0 = mesh.vertices[t[0]], p1 = mesh.vertices[t[1]], p2 = mesh.vertices[t[2]];
    Vec3 n = cross(p1 - p0, p2 - p0);
    double a2 = norm(n);
    s.face_area[f] = 0.5 * a2;
    s.total_area += s.face_area[f];
    s.face_centroid[f] = (p0 + p1 + p2) / 3.0;
    Vec3 N = n / a2;
    s.hat_grad[f][0] = cross(N, p2 - p1) / a2;
    s.hat_grad[f][1] = cross(N, p0 - p2) / a2;
    s.hat_grad[f][2] = cross(N, p1 - p0) / a2;
    for (int k = 0; k < 3; ++k) s.vertex_area[t[k]] += s.face_area[f] / 3.0;
  }
  s.h_mean = mesh.mean_edge_length();

  // Second fundamental form per face from an osculating quadric fitted over
  // the corners' vertex rings: the height along +N over the face plane is
  // h = c0 + c1 x + c2 y + c3 x^2 + c4 xy + c5 y^2 and Pi = -Hess h, oriented
  // so the unit sphere with outward normals has Pi = g. The fit is unbiased
  // for one-sided (boundary) neighborhoods, where gradients of averaged
  // vertex normals lose consistency.
  s.forms.Pi.resize(nf);
  s.forms.c.resize(nf);
  {
    std::vector<char> seen(nv, 0);
    std::vector<int> pts;
    for (int f = 0; f < nf; ++f) {
      pts.clear();
      auto add_ring_of = [&](int center) {
        for (int g : mesh.vertex_faces[center])
          for (int k = 0; k < 3; ++k) {
            int u = mesh.triangles[g][k];
            if (!seen[u]) {
              seen[u] = 1;
              pts.push_back(u);
            }
          }
      };
      for (int k = 0; k < 3; ++k) add_ring_of(mesh.triangles[f][k]);
      if (pts.size() < 6) {
        size_t first = pts.size();
        for (size_t i = 0; i < first; ++i) add_ring_of(pts[i]);
      }
      double scale = 0.0;
      for (int u : pts) scale = std::max(scale, norm(mesh.vertices[u] - s.face_centroid[f]));
      double ata[36] = {0.0}, atb[6] = {0.0};
      for (int u : pts) {
        seen[u] = 0;
        Vec3 d = mesh.vertices[u] - s.face_centroid[f];
        double x = dot(d, s.fframe[f].e1) / scale;
        double y = dot(d, s.fframe[f].e2) / scale;
        double z = dot(d, s.fframe[f].N) / scale;
        double m[6] = {1.0, x, y, x * x, x * y, y * y};
        for (int i = 0; i < 6; ++i) {
          for (int j = 0; j < 6; ++j) ata[i * 6 + j] += m[i] * m[j];
          atb[i] += m[i] * z;
        }
      }
      solve_dense(6, ata, atb);
      Mat2 hess;
      hess(0, 0) = 2.0 * atb[3] / scale;
      hess(0, 1) = atb[4] / scale;
      hess(1, 0) = atb[4] / scale;
      hess(1, 1) = 2.0 * atb[5] / scale;
      s.forms.Pi[f] = -1.0 * hess;
      s.forms.c[f] = matmul(s.forms.Pi[f], s.forms.Pi[f]);
    }
  }

  s.dPi = tensor_derivative(s, s.forms.Pi);
  return s;
}

}  // namespace naghdi
