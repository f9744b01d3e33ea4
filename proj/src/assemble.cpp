#include "naghdi/assemble.hpp"

#include <cmath>

#include "naghdi/kernels.hpp"
#include "naghdi/solvers.hpp"

namespace naghdi {

FaceScalar b_form_field(const FaceMat& t1, const FaceMat& t2, double beta) {
  if (t1.size() != t2.size()) throw std::invalid_argument("b_form_field: size mismatch");
  FaceScalar r(t1.size());
  for (size_t f = 0; f < t1.size(); ++f) r[f] = b_form(t1[f], t2[f], beta);
  return r;
}

FaceScalar j_density(const Surface& s, const MaterialParams& p, const ShellState& xi,
                     const ShellState& u) {
  p.validate();
  const double beta = p.beta(), gamma = p.gamma();
  const double isq = 1.0 / std::sqrt(gamma);
  StrainSet a = strains(s, xi);
  StrainSet b = strains(s, u);
  FaceVec dw2a = covariant_gradient(s, xi.w2);
  FaceVec dw2b = covariant_gradient(s, u.w2);
  FaceScalar w2a = scalar_to_faces(s, xi.w2);
  FaceScalar w2b = scalar_to_faces(s, u.w2);
  FaceScalar r(s.n_faces());
#pragma omp parallel for schedule(static)
  for (int f = 0; f < s.n_faces(); ++f) {
    double tra = trace(a.Upsilon[f]) + w2a[f] * isq;
    double trb = trace(b.Upsilon[f]) + w2b[f] * isq;
    r[f] = 2.0 * inner(a.Upsilon[f], b.Upsilon[f]) + 4.0 * dot(a.phi0[f], b.phi0[f]) +
           2.0 * beta * tra * trb + 2.0 * beta * trace(a.chi0[f]) * trace(b.chi0[f]) +
           2.0 * inner(a.chi0[f], b.chi0[f]) + dot(dw2a[f], dw2b[f]) +
           (2.0 / gamma) * w2a[f] * w2b[f];
  }
  return r;
}

DofMap DofMap::clamped(const SurfaceMesh& mesh) {
  DofMap d;
  d.free_of_vertex.assign(mesh.n_vertices(), -1);
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (!mesh.is_boundary[v]) {
      d.free_of_vertex[v] = d.n_free++;
      d.vertex_of_free.push_back(v);
    }
  return d;
}

TangentDofs TangentDofs::clamped(const SurfaceMesh& mesh) {
  TangentDofs d;
  d.free_of_vertex.assign(mesh.n_vertices(), -1);
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (!mesh.is_boundary[v]) {
      d.free_of_vertex[v] = d.n_free++;
      d.vertex_of_free.push_back(v);
    }
  return d;
}

namespace {

constexpr int kRows = 15;
constexpr int kLoc = 18;

// Strain matrix of one face: rows [Upsilon 2x2 | phi0 2 | trUpsilon+w2/sqrt(g)
// | tr chi0 | chi0 2x2 | Dw2 2 | w2], columns the 18 corner dofs
// (W1x W1y W2x W2y w1 w2 per corner, vertex-frame components).
void face_strain_matrix(const Surface& s, const MaterialParams& p, int f, double B[kRows][kLoc]) {
  const auto& t = s.mesh.triangles[f];
  const double isq = 1.0 / std::sqrt(p.gamma());
  for (int r = 0; r < kRows; ++r)
    for (int c = 0; c < kLoc; ++c) B[r][c] = 0.0;

  Vec3 fe[2] = {s.fframe[f].e1, s.fframe[f].e2};
  double proj[3][2][2];  // proj[k][a][i] = <f_i, e_a at corner k>
  double gk[3][2];       // gk[k][j] = <hat_grad_k, f_j>
  for (int k = 0; k < 3; ++k) {
    Vec3 ve[2] = {s.vframe[t[k]].e1, s.vframe[t[k]].e2};
    for (int a = 0; a < 2; ++a)
      for (int i = 0; i < 2; ++i) proj[k][a][i] = dot(fe[i], ve[a]);
    for (int j = 0; j < 2; ++j) gk[k][j] = dot(s.hat_grad[f][k], fe[j]);
  }
  const Mat2& Pi = s.forms.Pi[f];
  const Mat2& cf = s.forms.c[f];
  const auto& dPi = s.dPi[f];

  for (int k = 0; k < 3; ++k) {
    const int cW1 = 6 * k, cW2 = 6 * k + 2, cw1 = 6 * k + 4, cw2 = 6 * k + 5;
    for (int a = 0; a < 2; ++a) {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          double symd = 0.5 * (proj[k][a][i] * gk[k][j] + proj[k][a][j] * gk[k][i]);
          B[i * 2 + j][cW1 + a] += symd;
          B[8 + i * 2 + j][cW2 + a] += symd;
        }
      double trd = proj[k][a][0] * gk[k][0] + proj[k][a][1] * gk[k][1];
      B[6][cW1 + a] += trd;
      B[7][cW2 + a] += trd;
      for (int i = 0; i < 2; ++i) {
        double w1bar = proj[k][a][i] / 3.0;  // component i of the face average
        double w2bar = proj[k][a][i] / 3.0;
        B[4 + 0][cW1 + a] -= w1bar * Pi(i, 0);
        B[4 + 1][cW1 + a] -= w1bar * Pi(i, 1);
        B[4 + i][cW2 + a] += 0.5 * w2bar;
        for (int jj = 0; jj < 2; ++jj)
          for (int kk = 0; kk < 2; ++kk)
            B[8 + jj * 2 + kk][cW1 + a] -= w1bar * dPi[kk](i, jj);
        B[7][cW1 + a] -= w1bar * (dPi[0](i, 0) + dPi[1](i, 1));
      }
    }
    // w1 column: gradient into phi0, averages into Upsilon and chi0.
    for (int j = 0; j < 2; ++j) B[4 + j][cw1] += 0.5 * gk[k][j];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        B[i * 2 + j][cw1] += Pi(i, j) / 3.0;
        B[8 + i * 2 + j][cw1] += cf(i, j) / 3.0;
      }
    B[6][cw1] += trace(Pi) / 3.0;
    B[7][cw1] += trace(cf) / 3.0;
    // w2 column.
    for (int j = 0; j < 2; ++j) B[12 + j][cw2] += gk[k][j];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) B[8 + i * 2 + j][cw2] += Pi(i, j) / 3.0;
    B[6][cw2] += isq / 3.0;
    B[7][cw2] += trace(Pi) / 3.0;
    B[14][cw2] += 1.0 / 3.0;
  }
}

void strain_weights(const MaterialParams& p, double w[kRows]) {
  const double beta = p.beta(), gamma = p.gamma();
  double vals[kRows] = {2, 2, 2, 2, 4, 4, 2 * beta, 2 * beta, 2, 2, 2, 2, 1, 1, 2 / gamma};
  for (int r = 0; r < kRows; ++r) w[r] = vals[r];
}

}  // namespace

Csr assemble_stiffness(const Surface& s, const MaterialParams& p, const DofMap& dofs,
                       const FaceScalar* weight) {
  p.validate();
  double wr[kRows];
  strain_weights(p, wr);
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(s.n_faces()) * kLoc * kLoc / 2);
  double B[kRows][kLoc];
  for (int f = 0; f < s.n_faces(); ++f) {
    face_strain_matrix(s, p, f, B);
    double scale = s.face_area[f] * (weight ? (*weight)[f] : 1.0);
    const auto& t = s.mesh.triangles[f];
    int gdof[kLoc];
    for (int k = 0; k < 3; ++k)
      for (int c = 0; c < 6; ++c) gdof[6 * k + c] = dofs.index(t[k], c);
    double Kloc[kLoc][kLoc];
    for (int pcol = 0; pcol < kLoc; ++pcol)
      for (int q = pcol; q < kLoc; ++q) {
        double v = 0.0;
        for (int r = 0; r < kRows; ++r) v += wr[r] * B[r][pcol] * B[r][q];
        Kloc[pcol][q] = Kloc[q][pcol] = scale * v;
      }
    for (int pcol = 0; pcol < kLoc; ++pcol) {
      if (gdof[pcol] < 0) continue;
      for (int q = 0; q < kLoc; ++q) {
        if (gdof[q] < 0) continue;
        trip.push_back({gdof[pcol], gdof[q], Kloc[pcol][q]});
      }
    }
  }
  return csr_from_triplets(dofs.n_dofs(), std::move(trip));
}

Csr assemble_mass(const Surface& s, const DofMap& dofs, const FaceScalar* weight) {
  std::vector<Triplet> trip;
  for (int f = 0; f < s.n_faces(); ++f) {
    const auto& t = s.mesh.triangles[f];
    double scale = s.face_area[f] * (weight ? (*weight)[f] : 1.0) / 12.0;
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        double m = scale * (k == l ? 2.0 : 1.0);
        for (int c = 0; c < 6; ++c) {
          int i = dofs.index(t[k], c), j = dofs.index(t[l], c);
          if (i >= 0 && j >= 0) trip.push_back({i, j, m});
        }
      }
  }
  return csr_from_triplets(dofs.n_dofs(), std::move(trip));
}

std::vector<double> damping_diagonal(const Surface& s, const DofMap& dofs,
                                     const ScalarField& a) {
  if (a.size() != static_cast<size_t>(s.n_vertices()))
    throw std::invalid_argument("damping profile size mismatch");
  std::vector<double> d(dofs.n_dofs(), 0.0);
  for (int v = 0; v < s.n_vertices(); ++v) {
    if (a[v] < 0.0) throw std::invalid_argument("damping profile must be nonnegative");
    for (int c = 0; c < 6; ++c) {
      int i = dofs.index(v, c);
      if (i >= 0) d[i] = a[v] * s.vertex_area[v];
    }
  }
  return d;
}

AssembledSystem assemble(const Surface& s, const MaterialParams& p,
                         const ScalarField& damping_a) {
  AssembledSystem sys;
  sys.surface = &s;
  sys.params = p;
  sys.dofs = DofMap::clamped(s.mesh);
  if (sys.dofs.n_free == 0) throw std::runtime_error("assemble: every vertex is clamped");
  sys.K = assemble_stiffness(s, p, sys.dofs);
  sys.M = assemble_mass(s, sys.dofs);
  sys.C_diag = damping_diagonal(s, sys.dofs, damping_a);
  sys.a_vertex = damping_a;
  return sys;
}

std::vector<double> pack_state(const DofMap& dofs, const ShellState& st) {
  std::vector<double> x(dofs.n_dofs(), 0.0);
  for (int fi = 0; fi < dofs.n_free; ++fi) {
    int v = dofs.vertex_of_free[fi];
    x[6 * fi + 0] = st.W1[v].x;
    x[6 * fi + 1] = st.W1[v].y;
    x[6 * fi + 2] = st.W2[v].x;
    x[6 * fi + 3] = st.W2[v].y;
    x[6 * fi + 4] = st.w1[v];
    x[6 * fi + 5] = st.w2[v];
  }
  return x;
}

ShellState unpack_state(const DofMap& dofs, int n_vertices, std::span<const double> x) {
  ShellState st = ShellState::zero(n_vertices);
  for (int fi = 0; fi < dofs.n_free; ++fi) {
    int v = dofs.vertex_of_free[fi];
    st.W1[v] = {x[6 * fi + 0], x[6 * fi + 1]};
    st.W2[v] = {x[6 * fi + 2], x[6 * fi + 3]};
    st.w1[v] = x[6 * fi + 4];
    st.w2[v] = x[6 * fi + 5];
  }
  return st;
}

double energy(const AssembledSystem& sys, std::span<const double> u, std::span<const double> v) {
  std::vector<double> tmp(sys.n());
  kernels::spmv(sys.K, u, tmp);
  double e = 0.5 * kernels::dot(u, tmp);
  kernels::spmv(sys.M, v, tmp);
  e += 0.5 * kernels::dot(v, tmp);
  return e;
}

double coercivity_constant(const AssembledSystem& sys, std::uint64_t seed) {
  EigOptions opts;
  opts.seed = seed;
  return smallest_gen_eig(sys.K, sys.M, opts).value;
}

namespace {

// Local 6-dof (2 per corner) differential matrix: rows are the four DW
// components, columns the tangent dofs in vertex frames.
void face_tangent_diff(const Surface& s, int f, double D[4][6]) {
  const auto& t = s.mesh.triangles[f];
  Vec3 fe[2] = {s.fframe[f].e1, s.fframe[f].e2};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 6; ++c) D[r][c] = 0.0;
  for (int k = 0; k < 3; ++k) {
    Vec3 ve[2] = {s.vframe[t[k]].e1, s.vframe[t[k]].e2};
    for (int a = 0; a < 2; ++a)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          D[i * 2 + j][2 * k + a] += dot(fe[i], ve[a]) * dot(s.hat_grad[f][k], fe[j]);
  }
}

int tangent_index(const TangentDofs& dofs, int vertex, int comp) {
  int fi = dofs.free_of_vertex[vertex];
  return fi < 0 ? -1 : 2 * fi + comp;
}

template <typename LocalForm>
Csr assemble_tangent(const Surface& s, const TangentDofs& dofs, LocalForm&& local) {
  std::vector<Triplet> trip;
  double D[4][6];
  double L[6][6];
  for (int f = 0; f < s.n_faces(); ++f) {
    face_tangent_diff(s, f, D);
    local(f, D, L);
    const auto& t = s.mesh.triangles[f];
    int gdof[6];
    for (int k = 0; k < 3; ++k)
      for (int a = 0; a < 2; ++a) gdof[2 * k + a] = tangent_index(dofs, t[k], a);
    for (int pcol = 0; pcol < 6; ++pcol) {
      if (gdof[pcol] < 0) continue;
      for (int q = 0; q < 6; ++q)
        if (gdof[q] >= 0) trip.push_back({gdof[pcol], gdof[q], L[pcol][q]});
    }
  }
  return csr_from_triplets(dofs.n_dofs(), std::move(trip));
}

}  // namespace

Csr tangent_mass(const Surface& s, const TangentDofs& dofs) {
  std::vector<Triplet> trip;
  for (int f = 0; f < s.n_faces(); ++f) {
    const auto& t = s.mesh.triangles[f];
    double scale = s.face_area[f] / 12.0;
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        double m = scale * (k == l ? 2.0 : 1.0);
        for (int a = 0; a < 2; ++a) {
          int i = tangent_index(dofs, t[k], a), j = tangent_index(dofs, t[l], a);
          if (i >= 0 && j >= 0) trip.push_back({i, j, m});
        }
      }
  }
  return csr_from_triplets(dofs.n_dofs(), std::move(trip));
}

Csr tangent_b_form(const Surface& s, const TangentDofs& dofs, double beta) {
  return assemble_tangent(s, dofs, [&](int f, double D[4][6], double L[6][6]) {
    double area = s.face_area[f];
    for (int pcol = 0; pcol < 6; ++pcol)
      for (int q = pcol; q < 6; ++q) {
        double v = 0.0, trp = D[0][pcol] + D[3][pcol], trq = D[0][q] + D[3][q];
        // <S(W), S(U)> with S = sym(D)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            double sp = 0.5 * (D[i * 2 + j][pcol] + D[j * 2 + i][pcol]);
            double sq = 0.5 * (D[i * 2 + j][q] + D[j * 2 + i][q]);
            v += sp * sq;
          }
        v += beta * trp * trq;
        L[pcol][q] = L[q][pcol] = area * v;
      }
  });
}

Csr tangent_grad_form(const Surface& s, const TangentDofs& dofs) {
  return assemble_tangent(s, dofs, [&](int f, double D[4][6], double L[6][6]) {
    double area = s.face_area[f];
    for (int pcol = 0; pcol < 6; ++pcol)
      for (int q = pcol; q < 6; ++q) {
        double v = 0.0;
        for (int r = 0; r < 4; ++r) v += D[r][pcol] * D[r][q];
        L[pcol][q] = L[q][pcol] = area * v;
      }
  });
}

Csr tangent_korn_form(const Surface& s, const TangentDofs& dofs) {
  return assemble_tangent(s, dofs, [&](int f, double D[4][6], double L[6][6]) {
    double area = s.face_area[f];
    for (int pcol = 0; pcol < 6; ++pcol)
      for (int q = pcol; q < 6; ++q) {
        double v = 0.0;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            double sp = D[i * 2 + j][pcol] + D[j * 2 + i][pcol];
            double sq = D[i * 2 + j][q] + D[j * 2 + i][q];
            v += sp * sq;
          }
        L[pcol][q] = L[q][pcol] = area * v;
      }
  });
}

Csr tangent_e_form(const Surface& s, const TangentDofs& dofs, const FaceMat& DV, double beta) {
  if (DV.size() != static_cast<size_t>(s.n_faces()))
    throw std::invalid_argument("tangent_e_form: DV size mismatch");
  return assemble_tangent(s, dofs, [&](int f, double D[4][6], double L[6][6]) {
    double area = s.face_area[f];
    // b(S(W_p), G(V, DW_q)) with G = S(W_q) . DV, then symmetrized.
    Mat2 Sp, Sq, Gq;
    double raw[6][6];
    for (int pcol = 0; pcol < 6; ++pcol) {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          Sp(i, j) = 0.5 * (D[i * 2 + j][pcol] + D[j * 2 + i][pcol]);
      for (int q = 0; q < 6; ++q) {
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            Sq(i, j) = 0.5 * (D[i * 2 + j][q] + D[j * 2 + i][q]);
        Gq = matmul(Sq, DV[f]);
        raw[pcol][q] = area * (inner(Sp, Gq) + beta * trace(Sp) * trace(Gq));
      }
    }
    for (int pcol = 0; pcol < 6; ++pcol)
      for (int q = 0; q < 6; ++q) L[pcol][q] = 0.5 * (raw[pcol][q] + raw[q][pcol]);
  });
}

KornConstants korn_constants(const Surface& s, const MaterialParams& p, std::uint64_t seed) {
  p.validate();
  TangentDofs dofs = TangentDofs::clamped(s.mesh);
  if (dofs.n_free == 0) throw std::runtime_error("korn_constants: every vertex is clamped");
  Csr A = tangent_korn_form(s, dofs);
  Csr G = tangent_grad_form(s, dofs);
  Csr Mw = tangent_mass(s, dofs);
  Csr H1 = csr_add(G, 1.0, Mw);
  EigOptions opts;
  opts.seed = seed;
  KornConstants k;
  k.lambda = smallest_gen_eig(A, H1, opts).value;
  k.lambda0_formula = 4.0 / k.lambda;
  k.lambda0 = std::max(1.0, k.lambda0_formula);
  Csr Bb = tangent_b_form(s, dofs, p.beta());
  Csr BbM = csr_add(Bb, 1.0, Mw);
  k.lambda0_rayleigh = largest_gen_eig(G, BbM, opts).value;
  return k;
}

double eq48_certificate(const Surface& s, const MaterialParams& p, double lambda0,
                        std::uint64_t seed) {
  TangentDofs dofs = TangentDofs::clamped(s.mesh);
  Csr Bb = tangent_b_form(s, dofs, p.beta());
  Csr Mw = tangent_mass(s, dofs);
  Csr BbM = csr_add(Bb, 1.0, Mw);
  Csr G = tangent_grad_form(s, dofs);
  Csr P = BbM;
  for (double& v : P.val) v *= lambda0;
  P = csr_add(P, -1.0, G);
  EigOptions opts;
  opts.seed = seed;
  return smallest_gen_eig_indefinite(P, BbM, opts).value;
}

}  // namespace naghdi
