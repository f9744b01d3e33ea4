#include "naghdi/calculus.hpp"

#include <cstdio>

namespace naghdi {

namespace {
void check_faces(const Surface& s, size_t n, const char* what) {
  if (n != static_cast<size_t>(s.n_faces()))
    throw std::invalid_argument(std::string(what) + ": face field size mismatch");
}
void check_vertices(const Surface& s, size_t n, const char* what) {
  if (n != static_cast<size_t>(s.n_vertices()))
    throw std::invalid_argument(std::string(what) + ": vertex field size mismatch");
}
void check_same(size_t a, size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": operand size mismatch");
}
}  // namespace

FaceScalar scalar_to_faces(const Surface& s, const ScalarField& w) {
  check_vertices(s, w.size(), "scalar_to_faces");
  FaceScalar r(s.n_faces());
#pragma omp parallel for schedule(static)
  for (int f = 0; f < s.n_faces(); ++f) {
    const auto& t = s.mesh.triangles[f];
    r[f] = (w[t[0]] + w[t[1]] + w[t[2]]) / 3.0;
  }
  return r;
}

FaceVec tangent_to_faces(const Surface& s, const TangentField& W) {
  check_vertices(s, W.size(), "tangent_to_faces");
  FaceVec r(s.n_faces());
#pragma omp parallel for schedule(static)
  for (int f = 0; f < s.n_faces(); ++f) {
    const auto& t = s.mesh.triangles[f];
    Vec3 a{};
    for (int k = 0; k < 3; ++k) a += s.vertex_to_ambient(t[k], W[t[k]]);
    r[f] = s.ambient_to_face(f, a / 3.0);
  }
  return r;
}

ScalarField faces_to_scalar(const Surface& s, const FaceScalar& w) {
  check_faces(s, w.size(), "faces_to_scalar");
  ScalarField r(s.n_vertices(), 0.0);
  for (int f = 0; f < s.n_faces(); ++f)
    for (int k = 0; k < 3; ++k) {
      int v = s.mesh.triangles[f][k];
      r[v] += w[f] * s.face_area[f] / 3.0;
    }
  for (int v = 0; v < s.n_vertices(); ++v) r[v] /= s.vertex_area[v];
  return r;
}

TangentField faces_to_tangent(const Surface& s, const FaceVec& W) {
  check_faces(s, W.size(), "faces_to_tangent");
  std::vector<Vec3> acc(s.n_vertices(), Vec3{});
  for (int f = 0; f < s.n_faces(); ++f)
    for (int k = 0; k < 3; ++k) {
      int v = s.mesh.triangles[f][k];
      acc[v] += s.face_to_ambient(f, W[f]) * (s.face_area[f] / 3.0);
    }
  TangentField r(s.n_vertices());
  for (int v = 0; v < s.n_vertices(); ++v)
    r[v] = s.ambient_to_vertex(v, acc[v] / s.vertex_area[v]);
  return r;
}

std::vector<Mat2> facemat_to_vertices(const Surface& s, const FaceMat& T) {
  check_faces(s, T.size(), "facemat_to_vertices");
  // Average the ambient representation T_amb = sum_ij T(i,j) f_i (x) f_j,
  // then restrict to the vertex tangent plane.
  std::vector<std::array<Vec3, 3>> acc(s.n_vertices(), {Vec3{}, Vec3{}, Vec3{}});
  for (int f = 0; f < s.n_faces(); ++f) {
    Vec3 fe[2] = {s.fframe[f].e1, s.fframe[f].e2};
    double w = s.face_area[f] / 3.0;
    for (int k = 0; k < 3; ++k) {
      int v = s.mesh.triangles[f][k];
      // acc[v][a] stores row a of the ambient 3x3 tensor.
      for (int a = 0; a < 3; ++a) {
        Vec3 row{};
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) row += fe[j] * (T[f](i, j) * fe[i][a]);
        acc[v][a] += row * w;
      }
    }
  }
  std::vector<Mat2> r(s.n_vertices());
  for (int v = 0; v < s.n_vertices(); ++v) {
    Vec3 ve[2] = {s.vframe[v].e1, s.vframe[v].e2};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double val = 0.0;
        for (int a = 0; a < 3; ++a) val += ve[i][a] * dot(acc[v][a], ve[j]) / s.vertex_area[v];
        r[v](i, j) = val;
      }
  }
  return r;
}

FaceVec covariant_gradient(const Surface& s, const ScalarField& w) {
  check_vertices(s, w.size(), "covariant_gradient");
  FaceVec r(s.n_faces());
#pragma omp parallel for schedule(static)
  for (int f = 0; f < s.n_faces(); ++f) {
    const auto& t = s.mesh.triangles[f];
    Vec3 g{};
    for (int k = 0; k < 3; ++k) g += s.hat_grad[f][k] * w[t[k]];
    r[f] = s.ambient_to_face(f, g);
  }
  return r;
}

TangentField vertex_gradient(const Surface& s, const ScalarField& w) {
  check_vertices(s, w.size(), "vertex_gradient");
  TangentField out(s.n_vertices(), Vec2{});
  std::vector<char> seen(s.n_vertices(), 0);
  std::vector<int> ring;
  for (int v = 0; v < s.n_vertices(); ++v) {
    ring.clear();
    auto add_ring_of = [&](int center) {
      for (int f : s.mesh.vertex_faces[center])
        for (int k = 0; k < 3; ++k) {
          int u = s.mesh.triangles[f][k];
          if (u != v && !seen[u]) {
            seen[u] = 1;
            ring.push_back(u);
          }
        }
    };
    seen[v] = 1;
    add_ring_of(v);
    if (ring.size() < 6) {
      size_t first = ring.size();
      for (size_t i = 0; i < first; ++i) add_ring_of(ring[i]);
    }
    for (int u : ring) seen[u] = 0;
    seen[v] = 0;

    double scale = 0.0;
    for (int u : ring) scale = std::max(scale, norm(s.mesh.vertices[u] - s.mesh.vertices[v]));
    if (scale == 0.0 || ring.size() < 5) continue;
    double ata[36] = {0.0}, atb[6] = {0.0};
    auto accumulate = [&](int u) {
      Vec3 d = s.mesh.vertices[u] - s.mesh.vertices[v];
      double x = dot(d, s.vframe[v].e1) / scale;
      double y = dot(d, s.vframe[v].e2) / scale;
      double m[6] = {1.0, x, y, x * x, x * y, y * y};
      for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) ata[i * 6 + j] += m[i] * m[j];
        atb[i] += m[i] * w[u];
      }
    };
    accumulate(v);
    for (int u : ring) accumulate(u);
    solve_dense(6, ata, atb);
    out[v] = {atb[1] / scale, atb[2] / scale};
  }
  return out;
}

FaceMat covariant_differential(const Surface& s, const TangentField& W) {
  check_vertices(s, W.size(), "covariant_differential");
  FaceMat r(s.n_faces());
#pragma omp parallel for schedule(static)
  for (int f = 0; f < s.n_faces(); ++f) {
    const auto& t = s.mesh.triangles[f];
    Vec3 amb[3];
    for (int k = 0; k < 3; ++k) amb[k] = s.vertex_to_ambient(t[k], W[t[k]]);
    Vec3 fe[2] = {s.fframe[f].e1, s.fframe[f].e2};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double v = 0.0;
        for (int k = 0; k < 3; ++k) v += dot(fe[i], amb[k]) * dot(s.hat_grad[f][k], fe[j]);
        r[f](i, j) = v;
      }
  }
  return r;
}

FaceMat sym_field(const FaceMat& T) {
  FaceMat r(T.size());
  for (size_t f = 0; f < T.size(); ++f) r[f] = sym(T[f]);
  return r;
}

FaceMat transpose_field(const FaceMat& T) {
  FaceMat r(T.size());
  for (size_t f = 0; f < T.size(); ++f) r[f] = transpose(T[f]);
  return r;
}

FaceScalar trace_field(const FaceMat& T) {
  FaceScalar r(T.size());
  for (size_t f = 0; f < T.size(); ++f) r[f] = trace(T[f]);
  return r;
}

FaceScalar inner_field(const FaceMat& A, const FaceMat& B) {
  check_same(A.size(), B.size(), "inner_field");
  FaceScalar r(A.size());
  for (size_t f = 0; f < A.size(); ++f) r[f] = inner(A[f], B[f]);
  return r;
}

FaceVec interior_product_field(const FaceVec& W, const FaceMat& T) {
  check_same(W.size(), T.size(), "interior_product_field");
  FaceVec r(W.size());
  for (size_t f = 0; f < W.size(); ++f) r[f] = interior_product(W[f], T[f]);
  return r;
}

std::vector<std::array<Mat2, 2>> tensor_derivative(const Surface& s, const FaceMat& T) {
  check_faces(s, T.size(), "tensor_derivative");
  std::vector<std::array<Mat2, 2>> DT(s.n_faces(), {Mat2{}, Mat2{}});
#pragma omp parallel for schedule(static)
  for (int f = 0; f < s.n_faces(); ++f) {
    double A00 = 0, A01 = 0, A11 = 0;
    Mat2 b0, b1;
    int n_nb = 0;
    for (int k = 0; k < 3; ++k) {
      int g = s.mesh.face_neighbors[f][k];
      if (g < 0) continue;
      ++n_nb;
      // Align g's frame with f's by the smallest rotation between normals.
      Vec3 v = cross(s.fframe[g].N, s.fframe[f].N);
      double cth = dot(s.fframe[g].N, s.fframe[f].N);
      double kk = 1.0 / (1.0 + cth);
      auto apply = [&](Vec3 p) {
        Vec3 vp = cross(v, p);
        return p + vp + cross(v, vp) * kk;
      };
      Vec3 te1 = apply(s.fframe[g].e1);
      Vec3 te2 = apply(s.fframe[g].e2);
      Mat2 Jr;
      Jr(0, 0) = dot(s.fframe[f].e1, te1);
      Jr(0, 1) = dot(s.fframe[f].e1, te2);
      Jr(1, 0) = dot(s.fframe[f].e2, te1);
      Jr(1, 1) = dot(s.fframe[f].e2, te2);
      Mat2 diff = matmul(matmul(Jr, T[g]), transpose(Jr)) - T[f];
      Vec2 d = s.ambient_to_face(f, s.face_centroid[g] - s.face_centroid[f]);
      A00 += d.x * d.x;
      A01 += d.x * d.y;
      A11 += d.y * d.y;
      b0 += diff * d.x;
      b1 += diff * d.y;
    }
    if (n_nb == 0) {
      std::fprintf(stderr, "naghdi: face %d has no neighbors; tensor derivative = 0\n", f);
      continue;
    }
    double reg = 1e-12 * (A00 + A11) + 1e-300;
    A00 += reg;
    A11 += reg;
    double det = A00 * A11 - A01 * A01;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double r0 = b0(i, j), r1 = b1(i, j);
        DT[f][0](i, j) = (A11 * r0 - A01 * r1) / det;
        DT[f][1](i, j) = (A00 * r1 - A01 * r0) / det;
      }
  }
  return DT;
}

FaceMat interior_product3(const FaceVec& W, const std::vector<std::array<Mat2, 2>>& DT) {
  check_same(W.size(), DT.size(), "interior_product3");
  FaceMat r(W.size());
  for (size_t f = 0; f < W.size(); ++f)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        r[f](j, k) = W[f].x * DT[f][k](0, j) + W[f].y * DT[f][k](1, j);
  return r;
}

Mat2 g_map(const Mat2& DV, const Mat2& T) { return matmul(sym(T), DV); }

FaceMat g_map_field(const FaceMat& DV, const FaceMat& T) {
  check_same(DV.size(), T.size(), "g_map_field");
  FaceMat r(T.size());
  for (size_t f = 0; f < T.size(); ++f) r[f] = g_map(DV[f], T[f]);
  return r;
}

double integrate(const Surface& s, const FaceScalar& f) {
  check_faces(s, f.size(), "integrate");
  double acc = 0.0;
  for (int i = 0; i < s.n_faces(); ++i) acc += s.face_area[i] * f[i];
  return acc;
}

double l2_inner(const Surface& s, const FaceScalar& a, const FaceScalar& b) {
  check_faces(s, a.size(), "l2_inner");
  check_same(a.size(), b.size(), "l2_inner");
  double acc = 0.0;
  for (int i = 0; i < s.n_faces(); ++i) acc += s.face_area[i] * a[i] * b[i];
  return acc;
}

double l2_inner_vertex(const Surface& s, const ScalarField& a, const ScalarField& b) {
  return l2_inner(s, scalar_to_faces(s, a), scalar_to_faces(s, b));
}

double l2_inner(const Surface& s, const TangentField& a, const TangentField& b) {
  FaceVec fa = tangent_to_faces(s, a), fb = tangent_to_faces(s, b);
  double acc = 0.0;
  for (int i = 0; i < s.n_faces(); ++i) acc += s.face_area[i] * dot(fa[i], fb[i]);
  return acc;
}

}  // namespace naghdi
