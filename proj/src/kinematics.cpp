#include "naghdi/kinematics.hpp"

namespace naghdi {

FaceMat strain_upsilon(const Surface& s, const ShellState& xi) {
  FaceMat dw1 = covariant_differential(s, xi.W1);
  FaceScalar w1f = scalar_to_faces(s, xi.w1);
  FaceMat r(s.n_faces());
#pragma omp parallel for schedule(static)
  for (int f = 0; f < s.n_faces(); ++f) r[f] = sym(dw1[f]) + w1f[f] * s.forms.Pi[f];
  return r;
}

FaceMat strain_chi0(const Surface& s, const ShellState& xi) {
  FaceMat dw2 = covariant_differential(s, xi.W2);
  FaceVec w1face = tangent_to_faces(s, xi.W1);
  FaceScalar w1f = scalar_to_faces(s, xi.w1);
  FaceScalar w2f = scalar_to_faces(s, xi.w2);
  FaceMat kol = interior_product3(w1face, s.dPi);
  FaceMat r(s.n_faces());
#pragma omp parallel for schedule(static)
  for (int f = 0; f < s.n_faces(); ++f)
    r[f] = sym(dw2[f]) - kol[f] + w1f[f] * s.forms.c[f] + w2f[f] * s.forms.Pi[f];
  return r;
}

FaceVec strain_phi0(const Surface& s, const ShellState& xi) {
  FaceVec dw1 = covariant_gradient(s, xi.w1);
  FaceVec w1face = tangent_to_faces(s, xi.W1);
  FaceVec w2face = tangent_to_faces(s, xi.W2);
  FaceVec r(s.n_faces());
#pragma omp parallel for schedule(static)
  for (int f = 0; f < s.n_faces(); ++f)
    r[f] = 0.5 * dw1[f] - interior_product(w1face[f], s.forms.Pi[f]) + 0.5 * w2face[f];
  return r;
}

StrainSet strains(const Surface& s, const ShellState& xi) {
  return {strain_upsilon(s, xi), strain_chi0(s, xi), strain_phi0(s, xi)};
}

FaceMat strain_chi0_via_rotation(const Surface& s, const ShellState& xi) {
  // V = W2 - i(W1) Pi at vertices, with Pi transferred to vertex frames.
  auto Pi_v = facemat_to_vertices(s, s.forms.Pi);
  TangentField V(s.n_vertices());
  for (int v = 0; v < s.n_vertices(); ++v)
    V[v] = xi.W2[v] - interior_product(xi.W1[v], Pi_v[v]);
  FaceMat dv = covariant_differential(s, V);
  FaceMat dw1 = covariant_differential(s, xi.W1);
  FaceScalar w1f = scalar_to_faces(s, xi.w1);
  FaceScalar w2f = scalar_to_faces(s, xi.w2);
  FaceMat r(s.n_faces());
#pragma omp parallel for schedule(static)
  for (int f = 0; f < s.n_faces(); ++f) {
    Mat2 pidw = matmul(s.forms.Pi[f], dw1[f]);
    r[f] = sym(dv[f]) + sym(pidw) + w2f[f] * s.forms.Pi[f] + w1f[f] * s.forms.c[f];
  }
  return r;
}

ShellState multiplier_m(const Surface& s, const ShellState& xi, const TangentField& V) {
  FaceVec vf = tangent_to_faces(s, V);
  FaceMat dW1 = covariant_differential(s, xi.W1);
  FaceMat dW2 = covariant_differential(s, xi.W2);
  FaceVec dw1 = covariant_gradient(s, xi.w1);
  FaceVec dw2 = covariant_gradient(s, xi.w2);

  // Per-face directional derivatives: (grad_V W)_i = DW(i,j) V_j, V(w) = <Dw, V>.
  FaceVec dvW1(s.n_faces()), dvW2(s.n_faces());
  FaceScalar vw1(s.n_faces()), vw2(s.n_faces());
#pragma omp parallel for schedule(static)
  for (int f = 0; f < s.n_faces(); ++f) {
    Vec2 v = vf[f];
    dvW1[f] = {dW1[f](0, 0) * v.x + dW1[f](0, 1) * v.y, dW1[f](1, 0) * v.x + dW1[f](1, 1) * v.y};
    dvW2[f] = {dW2[f](0, 0) * v.x + dW2[f](0, 1) * v.y, dW2[f](1, 0) * v.x + dW2[f](1, 1) * v.y};
    vw1[f] = dot(dw1[f], v);
    vw2[f] = dot(dw2[f], v);
  }
  ShellState m;
  m.W1 = faces_to_tangent(s, dvW1);
  m.W2 = faces_to_tangent(s, dvW2);
  m.w1 = faces_to_scalar(s, vw1);
  m.w2 = faces_to_scalar(s, vw2);
  return m;
}

}  // namespace naghdi
