#include <doctest.h>

#include <cmath>
#include <random>

#include "naghdi/calculus.hpp"
#include "naghdi/kernels.hpp"
#include "naghdi/solvers.hpp"
#include "test_support.hpp"

using namespace naghdi;
using naghdi::testing::dense;
using naghdi::testing::plate_surface;
using naghdi::testing::random_clamped_state;
using naghdi::testing::to_eigen;

TEST_CASE("b form values") {
  CHECK(b_form(identity2(), identity2(), 0.5) == doctest::Approx(4.0));
  CHECK(b_form(volume_element2(), volume_element2(), 1.0) == doctest::Approx(2.0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Mat2 T;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) T(i, j) = u(rng);
    double beta = std::abs(u(rng));
    CHECK(b_form(T, T, beta) >= 0.0);
    CHECK(b_form(T, T, beta) >= inner(T, T) - 1e-14);  // b-coercivity for beta >= 0
  }
}

TEST_CASE("J density: hand-evaluated plate value and symmetry") {
  Surface s = plate_surface(6);
  MaterialParams p;
  p.mu_poisson = 1e-12;  // beta -> 0
  p.h_thickness = 1.0;   // gamma = 1/12
  ShellState st = ShellState::zero(s.n_vertices());
  for (int v = 0; v < s.n_vertices(); ++v) st.w2[v] = 1.0;
  FaceScalar j = j_density(s, p, st, st);
  for (double v : j) CHECK(v == doctest::Approx(24.0).epsilon(1e-6));

  // With a real Poisson ratio the same hand evaluation gives 2(1+beta)/gamma.
  p.mu_poisson = 0.25;
  j = j_density(s, p, st, st);
  double expect = 2.0 * (1.0 + p.beta()) / p.gamma();
  for (double v : j) CHECK(v == doctest::Approx(expect).epsilon(1e-12));

  MaterialParams pm;
  ShellState a = random_clamped_state(s, 11), b = random_clamped_state(s, 12);
  FaceScalar jab = j_density(s, pm, a, b);
  FaceScalar jba = j_density(s, pm, b, a);
  for (int f = 0; f < s.n_faces(); ++f)
    CHECK(jab[f] == doctest::Approx(jba[f]).epsilon(1e-12));

  ShellState zero = ShellState::zero(s.n_vertices());
  FaceScalar j0 = j_density(s, pm, zero, a);
  for (double v : j0) CHECK(v == 0.0);
  FaceScalar jaa = j_density(s, pm, a, a);
  for (double v : jaa) CHECK(v >= 0.0);
}

TEST_CASE("stiffness matches the density integral on random clamped states") {
  Surface s = Surface::build(make_cylinder_patch(6));
  MaterialParams p;
  AssembledSystem sys = assemble(s, p, ScalarField(s.n_vertices(), 0.0));
  CHECK(sys.K.asymmetry() < 1e-12 * sys.K.max_abs());
  for (int trial = 0; trial < 20; ++trial) {
    ShellState a = random_clamped_state(s, 100 + trial);
    ShellState b = random_clamped_state(s, 200 + trial);
    auto xa = pack_state(sys.dofs, a);
    auto xb = pack_state(sys.dofs, b);
    Eigen::MatrixXd K = dense(sys.K);
    double quad = to_eigen(xb).dot(K * to_eigen(xa));
    double form = integrate(s, j_density(s, p, a, b));
    CHECK(quad == doctest::Approx(form).epsilon(1e-10));
  }
}

TEST_CASE("mass matrix: interior hat oracle") {
  Surface s = plate_surface(5);
  MaterialParams p;
  AssembledSystem sys = assemble(s, p, ScalarField(s.n_vertices(), 0.0));
  int vertex = sys.dofs.vertex_of_free[0];
  ShellState st = ShellState::zero(s.n_vertices());
  st.w1[vertex] = 1.0;
  auto x = pack_state(sys.dofs, st);
  std::vector<double> mx(sys.n());
  kernels::spmv(sys.M, x, mx);
  double got = kernels::dot(x, mx);
  double expect = 0.0;
  for (int f : s.mesh.vertex_faces[vertex]) expect += s.face_area[f] / 6.0;
  CHECK(got == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("zero damping profile gives the zero operator") {
  Surface s = plate_surface(5);
  AssembledSystem sys = assemble(s, MaterialParams{}, ScalarField(s.n_vertices(), 0.0));
  for (double c : sys.C_diag) CHECK(c == 0.0);
}

TEST_CASE("energy values") {
  Surface s = plate_surface(6);
  MaterialParams p;
  AssembledSystem sys = assemble(s, p, ScalarField(s.n_vertices(), 0.0));
  std::vector<double> zero(sys.n(), 0.0);
  CHECK(energy(sys, zero, zero) == 0.0);

  auto v = random_vector(sys.n(), 5);
  std::vector<double> mv(sys.n());
  kernels::spmv(sys.M, v, mv);
  CHECK(energy(sys, zero, v) == doctest::Approx(0.5 * kernels::dot(v, mv)).epsilon(1e-13));

  EigOptions opts;
  auto eig = smallest_gen_eig(sys.K, sys.M, opts);
  CHECK(energy(sys, eig.vector, zero) == doctest::Approx(0.5 * eig.value).epsilon(1e-7));
}

TEST_CASE("coercivity constant is positive on all generated shapes") {
  MaterialParams p;
  for (const char* kind : {"plate", "annulus", "cylinder", "cap"}) {
    Surface s = Surface::build(make_mesh(kind, 6));
    AssembledSystem sys = assemble(s, p, ScalarField(s.n_vertices(), 0.0));
    double c3 = coercivity_constant(sys);
    INFO(kind, " c3 = ", c3);
    CHECK(c3 > 0.0);
  }
}

TEST_CASE("Korn constant matches a dense eigensolve on the coarse plate") {
  Surface s = plate_surface(4);  // h = 0.25
  MaterialParams p;
  TangentDofs dofs = TangentDofs::clamped(s.mesh);
  Csr A = tangent_korn_form(s, dofs);
  Csr G = tangent_grad_form(s, dofs);
  Csr Mw = tangent_mass(s, dofs);
  Csr H1 = csr_add(G, 1.0, Mw);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(dense(A), dense(H1));
  double dense_min = ges.eigenvalues().minCoeff();
  KornConstants k = korn_constants(s, p);
  CHECK(k.lambda == doctest::Approx(dense_min).epsilon(1e-8));
  CHECK(k.lambda0 >= 1.0);
  CHECK(k.lambda0_formula == doctest::Approx(4.0 / k.lambda).epsilon(1e-12));
}

TEST_CASE("lambda0 dominates the Rayleigh quotient of the lower bound") {
  Surface s = plate_surface(6);
  MaterialParams p;
  KornConstants k = korn_constants(s, p);
  TangentDofs dofs = TangentDofs::clamped(s.mesh);
  Csr Bb = tangent_b_form(s, dofs, p.beta());
  Csr Mw = tangent_mass(s, dofs);
  Csr G = tangent_grad_form(s, dofs);
  Eigen::MatrixXd BbM = dense(Bb) + dense(Mw);
  Eigen::MatrixXd Gd = dense(G);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd w(dofs.n_dofs());
    for (int i = 0; i < w.size(); ++i) w[i] = u(rng);
    double lhs = k.lambda0 * w.dot(BbM * w);
    double rhs = w.dot(Gd * w);
    CHECK(lhs >= rhs * (1.0 - 1e-10));
  }
  CHECK(k.lambda0_rayleigh <= k.lambda0 * (1.0 + 1e-8));
}

TEST_CASE("lower-bound inequality certified as a generalized eigenvalue bound") {
  MaterialParams p;
  for (const char* kind : {"plate", "cylinder"}) {
    Surface s = Surface::build(make_mesh(kind, 6));
    KornConstants k = korn_constants(s, p);
    double min_eig = eq48_certificate(s, p, k.lambda0);
    INFO(kind, " min_eig = ", min_eig);
    CHECK(min_eig >= -1e-10);
  }
}

TEST_CASE("discrete uniqueness: J(xi,xi) = 0 forces xi = 0 on clamped states") {
  Surface s = plate_surface(5);
  MaterialParams p;
  AssembledSystem sys = assemble(s, p, ScalarField(s.n_vertices(), 0.0));
  // c3 > 0 is exactly this statement at the matrix level.
  double c3 = coercivity_constant(sys);
  CHECK(c3 > 0.0);
  // And a spot check: any clamped state with positive mass norm has J > 0.
  ShellState a = random_clamped_state(s, 31);
  double j = integrate(s, j_density(s, p, a, a));
  double m = to_eigen(pack_state(sys.dofs, a)).dot(dense(sys.M) * to_eigen(pack_state(sys.dofs, a)));
  CHECK(j >= c3 * m * (1.0 - 1e-8));
}

TEST_CASE("material parameter validation") {
  MaterialParams p;
  p.mu_poisson = 0.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.mu_poisson = 0.3;
  p.h_thickness = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.h_thickness = 0.01;
  CHECK_NOTHROW(p.validate());
  CHECK(p.beta() == doctest::Approx(0.75));
  CHECK(p.gamma() == doctest::Approx(1e-4 / 12.0));
  CHECK(p.alpha() == doctest::Approx(1.0 / 1.3));
}
