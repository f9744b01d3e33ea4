#pragma once

#include <cstdint>
#include <span>

#include "naghdi/kinematics.hpp"
#include "naghdi/material.hpp"
#include "naghdi/sparse.hpp"

namespace naghdi {

// Pointwise product form on rank-2 tensors: b(T1,T2) = <T1,T2> + beta tr T1 tr T2.
inline double b_form(const Mat2& t1, const Mat2& t2, double beta) {
  return inner(t1, t2) + beta * trace(t1) * trace(t2);
}
FaceScalar b_form_field(const FaceMat& t1, const FaceMat& t2, double beta);

// Pointwise energy-density form of the evolution operator:
// J(xi,u) = 2<Y(xi),Y(u)> + 4<phi0(xi),phi0(u)>
//         + 2 beta [tr Y(xi) + w2/sqrt(g)][tr Y(u) + u2/sqrt(g)]
//         + 2 beta tr chi0(xi) tr chi0(u) + 2<chi0(xi),chi0(u)>
//         + <Dw2,Du2> + (2/g) w2 u2
FaceScalar j_density(const Surface& s, const MaterialParams& p, const ShellState& xi,
                     const ShellState& u);

// Six degrees of freedom per free (interior) vertex: W1x W1y W2x W2y w1 w2,
// in the vertex frame. Clamped vertices are eliminated.
struct DofMap {
  std::vector<int> vertex_of_free;
  std::vector<int> free_of_vertex;  // -1 when clamped
  int n_free = 0;

  int n_dofs() const { return 6 * n_free; }
  int index(int vertex, int comp) const {
    int fi = free_of_vertex[vertex];
    return fi < 0 ? -1 : 6 * fi + comp;
  }
  static DofMap clamped(const SurfaceMesh& mesh);
};

struct AssembledSystem {
  const Surface* surface = nullptr;
  MaterialParams params;
  DofMap dofs;
  Csr K;                       // stiffness, u' K xi = integral of J(xi,u)
  Csr M;                       // consistent P1 mass per component
  std::vector<double> C_diag;  // diagonal damping from a(x) (lumped a-mass)
  ScalarField a_vertex;

  int n() const { return K.n; }
};

// Assembles stiffness/mass/damping with clamped boundary conditions. Throws if
// every vertex is clamped.
AssembledSystem assemble(const Surface& s, const MaterialParams& p, const ScalarField& damping_a);

std::vector<double> pack_state(const DofMap& dofs, const ShellState& st);
ShellState unpack_state(const DofMap& dofs, int n_vertices, std::span<const double> x);

// Total energy E = 1/2 v'Mv + 1/2 u'Ku of a (displacement, velocity) pair.
double energy(const AssembledSystem& sys, std::span<const double> u, std::span<const double> v);

// Stiffness/mass with a per-face weight (p-weighted forms for the multiplier
// identities); weight == nullptr means 1.
Csr assemble_stiffness(const Surface& s, const MaterialParams& p, const DofMap& dofs,
                       const FaceScalar* weight = nullptr);
Csr assemble_mass(const Surface& s, const DofMap& dofs, const FaceScalar* weight = nullptr);
std::vector<double> damping_diagonal(const Surface& s, const DofMap& dofs,
                                     const ScalarField& a);

// Smallest generalized eigenvalue of (K, M): the discrete coercivity constant.
double coercivity_constant(const AssembledSystem& sys, std::uint64_t seed = 7);

// Korn constant and the derived multiplier constants, over clamped tangent
// fields (2 dofs per free vertex):
//   lambda          = min ||DW + D*W||^2 / ||W||_H1^2
//   lambda0_formula = 4 / lambda
//   lambda0         = max(1, 4/lambda)
//   lambda0_rayleigh= max ||DW||^2 / int[b(S(W),S(W)) + |W|^2]
struct KornConstants {
  double lambda = 0.0;
  double lambda0 = 0.0;
  double lambda0_formula = 0.0;
  double lambda0_rayleigh = 0.0;
};
KornConstants korn_constants(const Surface& s, const MaterialParams& p, std::uint64_t seed = 7);

// Smallest eigenvalue of the pencil lambda0*(B_b + M_W) - A_D against
// (B_b + M_W): certifies the lower-bound inequality when >= -tol.
double eq48_certificate(const Surface& s, const MaterialParams& p, double lambda0,
                        std::uint64_t seed = 7);

// Tangent-field matrices shared by the Korn and escape certificates.
struct TangentDofs {
  std::vector<int> vertex_of_free;
  std::vector<int> free_of_vertex;
  int n_free = 0;
  int n_dofs() const { return 2 * n_free; }
  static TangentDofs clamped(const SurfaceMesh& mesh);
};
Csr tangent_mass(const Surface& s, const TangentDofs& dofs);
// int b(S(W), S(W)) dM
Csr tangent_b_form(const Surface& s, const TangentDofs& dofs, double beta);
// int |DW|^2 dM
Csr tangent_grad_form(const Surface& s, const TangentDofs& dofs);
// int |DW + D*W|^2 dM
Csr tangent_korn_form(const Surface& s, const TangentDofs& dofs);
// int b(S(W), G(V, DW)) dM (symmetrized), DV given per face
Csr tangent_e_form(const Surface& s, const TangentDofs& dofs, const FaceMat& DV, double beta);

}  // namespace naghdi
