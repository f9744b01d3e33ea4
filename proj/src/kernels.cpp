#include "naghdi/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace naghdi {

std::vector<double> Csr::diagonal() const {
  std::vector<double> d(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = rowptr[i]; k < rowptr[i + 1]; ++k)
      if (col[k] == i) d[i] = val[k];
  return d;
}

double Csr::max_abs() const {
  double m = 0.0;
  for (double v : val) m = std::max(m, std::abs(v));
  return m;
}

double Csr::asymmetry() const {
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = rowptr[i]; k < rowptr[i + 1]; ++k) {
      int j = col[k];
      double aji = 0.0;
      for (int l = rowptr[j]; l < rowptr[j + 1]; ++l)
        if (col[l] == i) {
          aji = val[l];
          break;
        }
      m = std::max(m, std::abs(val[k] - aji));
    }
  return m;
}

Csr csr_from_triplets(int n, std::vector<Triplet> t) {
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  Csr A;
  A.n = n;
  A.rowptr.assign(n + 1, 0);
  for (size_t k = 0; k < t.size();) {
    size_t j = k;
    double v = 0.0;
    while (j < t.size() && t[j].row == t[k].row && t[j].col == t[k].col) v += t[j++].val;
    if (t[k].row < 0 || t[k].row >= n || t[k].col < 0 || t[k].col >= n)
      throw std::out_of_range("triplet index out of range");
    A.col.push_back(t[k].col);
    A.val.push_back(v);
    ++A.rowptr[t[k].row + 1];
    k = j;
  }
  for (int i = 0; i < n; ++i) A.rowptr[i + 1] += A.rowptr[i];
  return A;
}

Csr csr_add(const Csr& A, double alpha, const Csr& B) {
  if (A.n != B.n) throw std::invalid_argument("csr_add: dimension mismatch");
  std::vector<Triplet> t;
  t.reserve(A.col.size() + B.col.size());
  for (int i = 0; i < A.n; ++i) {
    for (int k = A.rowptr[i]; k < A.rowptr[i + 1]; ++k) t.push_back({i, A.col[k], A.val[k]});
    for (int k = B.rowptr[i]; k < B.rowptr[i + 1]; ++k)
      t.push_back({i, B.col[k], alpha * B.val[k]});
  }
  return csr_from_triplets(A.n, std::move(t));
}

void set_thread_cap(int n) {
#ifdef _OPENMP
  if (n >= 1) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

namespace kernels {

// Fixed-block reduction: per-block partial sums in parallel, serial combine in
// block order, so the result is identical for any thread count.
double dot(std::span<const double> a, std::span<const double> b) {
  const int n = static_cast<int>(a.size());
  const int nb = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nb);
#pragma omp parallel for schedule(static)
  for (int ib = 0; ib < nb; ++ib) {
    double s = 0.0;
    int end = std::min(n, (ib + 1) * kBlock);
    for (int i = ib * kBlock; i < end; ++i) s += a[i] * b[i];
    partial[ib] = s;
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

double sum(std::span<const double> a) {
  const int n = static_cast<int>(a.size());
  const int nb = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nb);
#pragma omp parallel for schedule(static)
  for (int ib = 0; ib < nb; ++ib) {
    double s = 0.0;
    int end = std::min(n, (ib + 1) * kBlock);
    for (int i = ib * kBlock; i < end; ++i) s += a[i];
    partial[ib] = s;
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const int n = static_cast<int>(x.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpay(std::span<const double> x, double alpha, std::span<double> y) {
  const int n = static_cast<int>(x.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) y[i] = x[i] + alpha * y[i];
}

void scale(double alpha, std::span<double> x) {
  const int n = static_cast<int>(x.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) x[i] *= alpha;
}

void copy(std::span<const double> x, std::span<double> y) {
  const int n = static_cast<int>(x.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) y[i] = x[i];
}

void spmv(const Csr& A, std::span<const double> x, std::span<double> y) {
  if (static_cast<int>(x.size()) != A.n || static_cast<int>(y.size()) != A.n)
    throw std::invalid_argument("spmv: size mismatch");
#pragma omp parallel for schedule(static)
  for (int i = 0; i < A.n; ++i) {
    double s = 0.0;
    for (int k = A.rowptr[i]; k < A.rowptr[i + 1]; ++k) s += A.val[k] * x[A.col[k]];
    y[i] = s;
  }
}

void mul_diag(std::span<const double> d, std::span<const double> x, std::span<double> y) {
  const int n = static_cast<int>(x.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) y[i] = d[i] * x[i];
}

namespace ref {

double dot(std::span<const double> a, std::span<const double> b) {
  const int n = static_cast<int>(a.size());
  const int nb = (n + kBlock - 1) / kBlock;
  double s = 0.0;
  for (int ib = 0; ib < nb; ++ib) {
    double p = 0.0;
    int end = std::min(n, (ib + 1) * kBlock);
    for (int i = ib * kBlock; i < end; ++i) p += a[i] * b[i];
    s += p;
  }
  return s;
}

double sum(std::span<const double> a) {
  const int n = static_cast<int>(a.size());
  const int nb = (n + kBlock - 1) / kBlock;
  double s = 0.0;
  for (int ib = 0; ib < nb; ++ib) {
    double p = 0.0;
    int end = std::min(n, (ib + 1) * kBlock);
    for (int i = ib * kBlock; i < end; ++i) p += a[i];
    s += p;
  }
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void spmv(const Csr& A, std::span<const double> x, std::span<double> y) {
  for (int i = 0; i < A.n; ++i) {
    double s = 0.0;
    for (int k = A.rowptr[i]; k < A.rowptr[i + 1]; ++k) s += A.val[k] * x[A.col[k]];
    y[i] = s;
  }
}

}  // namespace ref
}  // namespace kernels
}  // namespace naghdi
