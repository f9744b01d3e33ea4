#include <doctest.h>

#include "naghdi/kernels.hpp"
#include "naghdi/solvers.hpp"
#include "test_support.hpp"

using namespace naghdi;
namespace ke = kernels;

TEST_CASE("parallel kernels match the serial references bitwise") {
  const int n = 10000 + 37;
  auto a = random_vector(n, 1);
  auto b = random_vector(n, 2);

  CHECK(ke::dot(a, b) == ke::ref::dot(a, b));
  CHECK(ke::sum(a) == ke::ref::sum(a));

  auto y1 = b, y2 = b;
  ke::axpy(0.37, a, y1);
  ke::ref::axpy(0.37, a, y2);
  for (int i = 0; i < n; ++i) CHECK(y1[i] == y2[i]);

  Surface s = testing::plate_surface(12);
  AssembledSystem sys = assemble(s, MaterialParams{}, ScalarField(s.n_vertices(), 0.0));
  auto x = random_vector(sys.n(), 3);
  std::vector<double> out1(sys.n()), out2(sys.n());
  ke::spmv(sys.K, x, out1);
  ke::ref::spmv(sys.K, x, out2);
  for (int i = 0; i < sys.n(); ++i) CHECK(out1[i] == out2[i]);
}

TEST_CASE("reductions are independent of the thread count") {
  const int n = 50001;
  auto a = random_vector(n, 7);
  auto b = random_vector(n, 8);
  set_thread_cap(1);
  double d1 = ke::dot(a, b);
  double s1 = ke::sum(a);
  set_thread_cap(4);
  double d4 = ke::dot(a, b);
  double s4 = ke::sum(a);
  CHECK(d1 == d4);
  CHECK(s1 == s4);
}

TEST_CASE("pcg solves SPD systems and flags indefiniteness") {
  Surface s = testing::plate_surface(8);
  AssembledSystem sys = assemble(s, MaterialParams{}, ScalarField(s.n_vertices(), 0.0));
  auto xref = random_vector(sys.n(), 4);
  std::vector<double> b(sys.n());
  ke::spmv(sys.K, xref, b);
  std::vector<double> x(sys.n(), 0.0);
  auto res = pcg(sys.K, b, x, 1e-12, 100000);
  CHECK(res.converged);
  double err = 0.0;
  for (int i = 0; i < sys.n(); ++i) err = std::max(err, std::abs(x[i] - xref[i]));
  CHECK(err < 1e-6);

  // -M is negative definite: the first iteration hits negative curvature.
  Csr negM = sys.M;
  for (double& v : negM.val) v = -v;
  std::vector<double> x2(sys.n(), 0.0);
  auto res2 = pcg(negM, b, x2, 1e-12, 100);
  CHECK(res2.indefinite);
}

TEST_CASE("generalized eigensolvers against dense oracles") {
  Surface s = testing::plate_surface(4);
  AssembledSystem sys = assemble(s, MaterialParams{}, ScalarField(s.n_vertices(), 0.0));
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(testing::dense(sys.K),
                                                                testing::dense(sys.M));
  EigOptions opts;
  auto lo = smallest_gen_eig(sys.K, sys.M, opts);
  CHECK(lo.value == doctest::Approx(ges.eigenvalues().minCoeff()).epsilon(1e-8));

  auto hi = largest_gen_eig(sys.K, sys.M, opts);
  CHECK(hi.value == doctest::Approx(ges.eigenvalues().maxCoeff()).epsilon(1e-6));

  // Indefinite pencil: K - sigma M with sigma inside the spectrum.
  double sigma = 0.5 * (ges.eigenvalues()(0) + ges.eigenvalues()(3));
  Csr shifted = csr_add(sys.K, -sigma, sys.M);
  auto lo2 = smallest_gen_eig_indefinite(shifted, sys.M, opts);
  CHECK(lo2.value ==
        doctest::Approx(ges.eigenvalues().minCoeff() - sigma).epsilon(1e-7));
}
