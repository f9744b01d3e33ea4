#include "naghdi/solvers.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "naghdi/kernels.hpp"

namespace naghdi {

namespace ke = kernels;

CgResult pcg(const Csr& A, std::span<const double> b, std::span<double> x, double tol,
             int max_iters) {
  const int n = A.n;
  std::vector<double> r(n), z(n), p(n), Ap(n), dinv(n);
  auto diag = A.diagonal();
  for (int i = 0; i < n; ++i) dinv[i] = (diag[i] > 0.0) ? 1.0 / diag[i] : 1.0;

  ke::spmv(A, x, Ap);
  for (int i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
  double bnorm = std::sqrt(ke::dot(b, b));
  if (bnorm == 0.0) bnorm = 1.0;
  double rnorm = std::sqrt(ke::dot(r, r));
  CgResult res;
  if (rnorm / bnorm <= tol) {
    res.converged = true;
    res.rel_residual = rnorm / bnorm;
    return res;
  }
  ke::mul_diag(dinv, r, z);
  ke::copy(z, p);
  double rz = ke::dot(r, z);
  for (int it = 0; it < max_iters; ++it) {
    ke::spmv(A, p, Ap);
    double pAp = ke::dot(p, Ap);
    if (!(pAp > 0.0)) {
      res.indefinite = true;
      res.iters = it;
      res.rel_residual = rnorm / bnorm;
      return res;
    }
    double alpha = rz / pAp;
    ke::axpy(alpha, p, x);
    ke::axpy(-alpha, Ap, r);
    rnorm = std::sqrt(ke::dot(r, r));
    res.iters = it + 1;
    if (rnorm / bnorm <= tol) {
      res.converged = true;
      break;
    }
    ke::mul_diag(dinv, r, z);
    double rz_new = ke::dot(r, z);
    ke::xpay(z, rz_new / rz, p);
    rz = rz_new;
  }
  res.rel_residual = rnorm / bnorm;
  return res;
}

std::vector<double> random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

namespace {

double b_norm(const Csr& B, std::span<const double> x, std::vector<double>& scratch) {
  ke::spmv(B, x, scratch);
  return std::sqrt(ke::dot(x, scratch));
}

double eig_residual(const Csr& A, const Csr& B, std::span<const double> x, double lambda) {
  std::vector<double> ax(A.n), bx(A.n);
  ke::spmv(A, x, ax);
  ke::spmv(B, x, bx);
  ke::axpy(-lambda, bx, ax);
  double xb = std::sqrt(ke::dot(x, bx));
  return std::sqrt(ke::dot(ax, ax)) / (xb > 0.0 ? xb : 1.0);
}

}  // namespace

EigResult smallest_gen_eig(const Csr& A, const Csr& B, const EigOptions& opts) {
  const int n = A.n;
  if (n == 0) throw std::invalid_argument("smallest_gen_eig: empty system");
  std::vector<double> x = random_vector(n, opts.seed);
  std::vector<double> bx(n), y(n, 0.0), scratch(n), ay(n);
  double nb = b_norm(B, x, scratch);
  for (int i = 0; i < n; ++i) x[i] /= nb;
  double lambda = 0.0, lambda_prev = 0.0;
  EigResult out;
  bool converged = false;
  std::vector<double> relres_hist;
  relres_hist.reserve(opts.max_outer);
  for (int it = 0; it < opts.max_outer; ++it) {
    ke::spmv(B, x, bx);
    auto cg = pcg(A, bx, y, opts.cg_tol, opts.cg_max_iters);
    if (cg.indefinite) throw NotSpdError("smallest_gen_eig: matrix not positive definite");
    nb = b_norm(B, y, scratch);
    for (int i = 0; i < n; ++i) y[i] /= nb;
    ke::spmv(B, y, scratch);
    ke::spmv(A, y, ay);
    lambda = ke::dot(y, ay) / ke::dot(y, scratch);
    x = y;
    out.iters = it + 1;
    double rnum = 0.0, rden = 0.0;
    for (int i = 0; i < n; ++i) {
      double r = ay[i] - lambda * scratch[i];
      rnum += r * r;
      rden += ay[i] * ay[i];
    }
    double relres = std::sqrt(rnum) / std::max(std::sqrt(rden), 1e-300);
    relres_hist.push_back(relres);
    bool settled =
        it >= 2 && std::abs(lambda - lambda_prev) <= opts.tol * std::max(std::abs(lambda), 1e-300);
    // Tight eigen-residual: the pair itself converged.
    if (settled && relres <= 1e-7) {
      converged = true;
      break;
    }
    // Clustered lowest eigenvalues: the vector keeps rotating inside the
    // cluster while the value is already right, so the residual stagnates.
    // Certify the candidate by positive definiteness of A - (lambda - m) B,
    // which a stalled interior value fails.
    bool stagnant = it >= 30 && relres > 0.5 * relres_hist[it - 20];
    if (stagnant && relres <= 5e-2 && it % 10 == 0) {
      double margin = 1e-3 * std::abs(lambda) + 1e-300;
      Csr probe = csr_add(A, -(lambda - margin), B);
      std::vector<double> pb = random_vector(n, opts.seed + 991);
      std::vector<double> px(n, 0.0);
      auto pr = pcg(probe, pb, px, 1e-8, 3 * n + 1000);
      if (!pr.indefinite) {
        converged = true;
        break;
      }
    }
    lambda_prev = lambda;
  }
  out.value = lambda;
  out.vector = x;
  out.residual = eig_residual(A, B, x, lambda);
  if (!converged && out.iters >= opts.max_outer)
    throw std::runtime_error("smallest_gen_eig: no convergence after " +
                             std::to_string(opts.max_outer) +
                             " iterations, residual = " + std::to_string(out.residual));
  return out;
}

EigResult largest_gen_eig(const Csr& A, const Csr& B, const EigOptions& opts) {
  const int n = A.n;
  std::vector<double> x = random_vector(n, opts.seed);
  std::vector<double> ax(n), y(n, 0.0), scratch(n);
  double nb = b_norm(B, x, scratch);
  for (int i = 0; i < n; ++i) x[i] /= nb;
  double lambda = 0.0, lambda_prev = 0.0;
  EigResult out;
  for (int it = 0; it < opts.max_outer; ++it) {
    ke::spmv(A, x, ax);
    auto cg = pcg(B, ax, y, opts.cg_tol, opts.cg_max_iters);
    if (cg.indefinite) throw NotSpdError("largest_gen_eig: B not positive definite");
    nb = b_norm(B, y, scratch);
    if (nb == 0.0) {  // A x = 0: largest eigenvalue is 0 on this subspace
      out.value = 0.0;
      out.vector = x;
      return out;
    }
    for (int i = 0; i < n; ++i) y[i] /= nb;
    std::vector<double> ay(n);
    ke::spmv(A, y, ay);
    ke::spmv(B, y, scratch);
    lambda = ke::dot(y, ay) / ke::dot(y, scratch);
    x = y;
    out.iters = it + 1;
    if (it >= 5 && std::abs(lambda - lambda_prev) <= opts.tol * std::max(std::abs(lambda), 1e-300))
      break;
    lambda_prev = lambda;
  }
  out.value = lambda;
  out.vector = x;
  out.residual = eig_residual(A, B, x, lambda);
  return out;
}

EigResult smallest_gen_eig_indefinite(const Csr& A, const Csr& B, const EigOptions& opts) {
  // Shifted inverse power iteration. The shift must exceed -lambda_min (for
  // positive definiteness) but stay small (oversized shifts kill the
  // convergence ratio), so it adapts: grow on indefiniteness, shrink on
  // stagnation. The dominant pencil eigenvalue bounds |lambda_min| from above.
  auto diag_a = A.diagonal();
  auto diag_b = B.diagonal();
  double diag_bound = 0.0, pencil_scale = 0.0;
  for (int i = 0; i < A.n; ++i)
    if (diag_b[i] > 0.0) {
      diag_bound = std::max(diag_bound, -diag_a[i] / diag_b[i]);
      pencil_scale = std::max(pencil_scale, std::abs(diag_a[i]) / diag_b[i]);
    }
  EigOptions pw = opts;
  pw.tol = 1e-4;
  pw.max_outer = 100;
  double dominant = 0.0;
  try {
    dominant = std::abs(largest_gen_eig(A, B, pw).value);
  } catch (const std::runtime_error&) {
    dominant = pencil_scale;
  }
  double s = diag_bound + 1e-3 * dominant + 1e-12 * pencil_scale + 1e-300;
  double s_hi = 2.4 * dominant + 1e-6 * pencil_scale + 1.0e-300;
  for (int attempt = 0; attempt < 40; ++attempt) {
    Csr As = csr_add(A, s, B);
    try {
      EigOptions sub = opts;
      sub.seed = opts.seed + attempt;
      EigResult r = smallest_gen_eig(As, B, sub);
      r.value -= s;
      r.residual = eig_residual(A, B, r.vector, r.value);
      return r;
    } catch (const NotSpdError&) {
      s = std::min(4.0 * s + 1e-6 * pencil_scale, std::max(s_hi, 4.0 * s));
    } catch (const std::runtime_error&) {
      if (s <= diag_bound + 1e-12 * pencil_scale) throw;  // cannot shrink further
      s = diag_bound + 0.25 * (s - diag_bound);
    }
  }
  throw std::runtime_error("smallest_gen_eig_indefinite: could not find a workable shift");
}

}  // namespace naghdi
