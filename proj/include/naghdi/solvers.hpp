#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "naghdi/sparse.hpp"

namespace naghdi {

struct NotSpdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CgResult {
  int iters = 0;
  double rel_residual = 0.0;
  bool converged = false;
  bool indefinite = false;  // negative curvature encountered
};

// Jacobi-preconditioned conjugate gradients for SPD systems; x holds the
// start vector on entry and the solution on exit.
CgResult pcg(const Csr& A, std::span<const double> b, std::span<double> x, double tol,
             int max_iters);

struct EigOptions {
  double tol = 1e-10;
  int max_outer = 500;
  double cg_tol = 1e-12;
  int cg_max_iters = 100000;
  std::uint64_t seed = 1234;
};

struct EigResult {
  double value = 0.0;
  std::vector<double> vector;
  int iters = 0;
  double residual = 0.0;  // ||A x - value B x|| / ||x||_B at exit
};

// Smallest eigenvalue of A x = lambda B x, A SPD (inverse power iteration
// with CG inner solves). Throws on non-convergence, reporting the residual.
EigResult smallest_gen_eig(const Csr& A, const Csr& B, const EigOptions& opts = {});

// Largest eigenvalue of A x = lambda B x, B SPD (power iteration on B^{-1}A).
EigResult largest_gen_eig(const Csr& A, const Csr& B, const EigOptions& opts = {});

// Smallest eigenvalue for symmetric, possibly indefinite A (B SPD): shifts A
// until SPD, then runs inverse power iteration on the shifted pencil.
EigResult smallest_gen_eig_indefinite(const Csr& A, const Csr& B, const EigOptions& opts = {});

std::vector<double> random_vector(int n, std::uint64_t seed);

}  // namespace naghdi
